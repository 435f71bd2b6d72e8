#include "stacharge/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "stacharge/errors.hpp"

namespace stacharge {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 11);
    return std::string(buf, res.ptr);
}

std::filesystem::path summary_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".summary.json");
    return p;
}

std::string summary_document(const Trajectory& trajectory, const ChargeReport& report, const ProtocolSpec& spec,
                             const DecoherenceSpec& dec) {
    const double omega0 = spec.pulse.omega0();
    const auto& d = trajectory.diagnostics;
    nlohmann::json j;
    j["protocol"] = std::string(to_string(spec.protocol));
    j["family"] = std::string(to_string(spec.pulse.family()));
    j["omega0_tau_c"] = spec.pulse.omega0_tau_c();
    j["gamma_minus"] = dec.gamma_minus / omega0;
    j["gamma_z"] = dec.gamma_z / omega0;
    j["level_ratio"] = spec.level_ratio;
    j["W_norm_final"] = report.W_norm;
    j["W_charged_final"] = report.W_charged;
    j["P_avg"] = report.P_avg;
    j["P_avg_charged"] = report.P_avg_charged;
    j["p1_final"] = report.populations[0];
    j["p2_final"] = report.populations[1];
    j["p3_final"] = report.populations[2];
    j["max_norm_drift"] = d.max_norm_drift;
    j["max_trace_drift"] = d.max_trace_drift;
    j["min_eigenvalue"] = trajectory.is_open() ? d.min_eigenvalue : 0.0;
    j["accepted_steps"] = d.accepted_steps;
    j["rejected_steps"] = d.rejected_steps;
    return j.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, double level_ratio, double omega0) {
    const auto w = energy_series(trajectory, level_ratio);
    const auto p = instantaneous_power(trajectory, level_ratio);
    out << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const auto& pop = trajectory.populations[i];
        out << format_number(trajectory.times[i]) << ',' << format_number(omega0 * trajectory.times[i]) << ','
            << format_number(pop[0]) << ',' << format_number(pop[1]) << ',' << format_number(pop[2]) << ','
            << format_number(w[i]) << ',' << format_number(p[i] / omega0) << '\n';
    }
}

void write_trajectory(const Trajectory& trajectory, const ChargeReport& report, const ProtocolSpec& spec,
                      const DecoherenceSpec& dec, const std::filesystem::path& path) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        write_trajectory_csv(out, trajectory, spec.level_ratio, spec.pulse.omega0());
        if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    }
    const auto sp = summary_path_for(path);
    std::ofstream out(sp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + sp.string() + "' for writing");
    out << summary_document(trajectory, report, spec, dec);
    if (!out) throw std::runtime_error("write failed for '" + sp.string() + "'");
}

void write_sweep_table(std::ostream& out, const SweepResult& result) {
    const char* axis = result.variable == SweepVariable::TauC ? "omega0_tau_c" : "gamma_over_omega0";
    out << axis
        << ",W_norm_STA,W_norm_STIRAP,W_charged_STA,W_charged_STIRAP,P_avg_STA,P_avg_STIRAP,"
           "P_charged_STA,P_charged_STIRAP,drift_STA,drift_STIRAP,status\n";
    const double nan = std::nan("");
    for (const auto& row : result.rows) {
        const auto get = [&](const std::optional<ProtocolOutcome>& o, auto field) { return o ? field(*o) : nan; };
        const auto w = [](const ProtocolOutcome& o) { return o.report.W_norm; };
        const auto wc = [](const ProtocolOutcome& o) { return o.report.W_charged; };
        const auto p = [](const ProtocolOutcome& o) { return o.report.P_avg; };
        const auto pc = [](const ProtocolOutcome& o) { return o.report.P_avg_charged; };
        const auto drift = [](const ProtocolOutcome& o) {
            return o.open ? o.diagnostics.max_trace_drift : o.diagnostics.max_norm_drift;
        };
        out << format_number(row.value) << ',' << format_number(get(row.sta, w)) << ','
            << format_number(get(row.stirap, w)) << ',' << format_number(get(row.sta, wc)) << ','
            << format_number(get(row.stirap, wc)) << ',' << format_number(get(row.sta, p)) << ','
            << format_number(get(row.stirap, p)) << ',' << format_number(get(row.sta, pc)) << ','
            << format_number(get(row.stirap, pc)) << ',' << format_number(get(row.sta, drift)) << ','
            << format_number(get(row.stirap, drift)) << ','
            << (!row.ok() ? "failed" : row.flagged ? "flagged" : "ok") << '\n';
    }
}

void write_pulse_table(std::ostream& out, const std::vector<PulseTableRow>& rows, double omega0) {
    out << "t,omega0_t,omega1,omega2,omega_a,omega1_tilde,omega2_tilde,phi\n";
    for (const auto& r : rows) {
        out << format_number(r.t) << ',' << format_number(omega0 * r.t) << ',' << format_number(r.omega1 / omega0)
            << ',' << format_number(r.omega2 / omega0) << ',' << format_number(r.omega_a / omega0) << ','
            << format_number(r.omega1_tilde / omega0) << ',' << format_number(r.omega2_tilde / omega0) << ','
            << format_number(r.phi) << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    return out;
}

double parse_cell(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ValidationError("CSV cell is not a number: '" + s + "'");
    }
    return v;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("no CSV column named '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return parse_cell(rows.at(row).at(column(name)));
}

const std::string& CsvTable::text(std::size_t row, const std::string& name) const {
    return rows.at(row).at(column(name));
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("CSV input is empty");
    table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) throw ValidationError("CSV row has the wrong number of cells");
        table.rows.push_back(cells);
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_csv(in);
}

}  // namespace stacharge
