#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stacharge/config.hpp"
#include "stacharge/errors.hpp"
#include "stacharge/experiments.hpp"
#include "stacharge/io.hpp"

namespace stacharge::cli {

namespace {

constexpr const char* kUsage =
    "usage: stacharge <command> [options]\n"
    "\n"
    "commands:\n"
    "  simulate      --config FILE [--output CSV]      run one protocol, write trajectory + summary\n"
    "  sweep-tau     [--config FILE] [--family F]      W and P versus omega0*tau_c, STA and STIRAP\n"
    "  sweep-gamma   --channel dissipation|dephasing   final W versus gamma/omega0\n"
    "  emit-pulses   [--config FILE] [--family F]      tabulate Omega_1, Omega_2, Omega_a and rotated pulses\n"
    "  check-cd      [--family F] [--dt FRACTION]      numeric vs analytic counter-diabatic term\n"
    "  check-frame   [--omega0-tau-c X]                rotated-frame equivalence of the STA dynamics\n"
    "\n"
    "run 'stacharge <command> --help' for the options of a command.\n";

// Options shared by every subcommand. Unset flags fall back to the config file, then to defaults.
struct Common {
    std::string config;
    std::string family;
    std::optional<double> omega0_tau_c;
    std::optional<std::size_t> samples;
    std::string output;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "YAML run configuration");
    app->add_option("--family", c.family, "pulse family: Gaussian, Sinusoid, Ramp");
    app->add_option("--omega0-tau-c", c.omega0_tau_c, "dimensionless charging time");
    app->add_option("--samples", c.samples, "grid points per run");
    app->add_option("--output", c.output, "output CSV path (stdout when omitted)");
}

RunConfig base_config(const Common& c, const char* default_protocol = "STA") {
    RunConfig cfg = c.config.empty()
                        ? parse_config(std::string("{protocol: ") + default_protocol +
                                       ", family: Gaussian, omega0_tau_c: 7.2}")
                        : load_config(c.config);
    if (!c.family.empty() || c.omega0_tau_c) {
        const auto family = c.family.empty() ? std::optional(cfg.protocol.pulse.family()) : parse_pulse_family(c.family);
        if (!family) throw ValidationError("option '--family' must be one of Gaussian, Sinusoid, Ramp (got " + c.family + ")");
        const double omega0 = cfg.protocol.pulse.omega0();
        const double wt = c.omega0_tau_c.value_or(cfg.protocol.pulse.omega0_tau_c());
        if (!(wt > 0.0)) throw ValidationError("option '--omega0-tau-c' must be > 0");
        PulseShape shape;
        if (family == cfg.protocol.pulse.family() && !c.omega0_tau_c) {
            shape = {cfg.protocol.pulse.alpha(), cfg.protocol.pulse.sigma(), cfg.protocol.pulse.beta()};
        }
        cfg.protocol.pulse = PulseSpec(*family, omega0, wt / omega0, shape);
    }
    if (c.samples) {
        if (*c.samples < 3) throw ValidationError("option '--samples' must be >= 3");
        cfg.run.samples = *c.samples;
        cfg.sweep_samples = std::max<std::size_t>(*c.samples, 100);
    }
    if (!c.output.empty()) cfg.output = c.output;
    return cfg;
}

// Writes to the file named by path, or to out when path is empty.
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(f);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

int run_simulate(const Common& c, std::ostream& out) {
    if (c.config.empty()) throw ValidationError("simulate needs --config");
    const RunConfig cfg = base_config(c);
    const RunResult run = run_protocol(cfg.protocol, cfg.decoherence, cfg.run);
    const std::string summary = summary_document(run.trajectory, run.report, cfg.protocol, cfg.decoherence);
    if (!cfg.output.empty()) {
        write_trajectory(run.trajectory, run.report, cfg.protocol, cfg.decoherence, cfg.output);
    }
    if (!cfg.summary.empty()) {
        emit(cfg.summary, out, [&](std::ostream& os) { os << summary; });
    }
    out << summary;
    return 0;
}

int report_rows(const SweepResult& result, std::ostream& err) {
    int status = 0;
    for (const auto& row : result.rows) {
        if (!row.ok()) {
            err << "row " << format_number(row.value) << " failed: " << row.error << '\n';
            status = 2;
        } else if (row.flagged) {
            err << "row " << format_number(row.value) << " breaks propagator invariants\n";
        }
    }
    return status;
}

int run_sweep_tau(const Common& c, bool serial, std::optional<double> lo, std::optional<double> hi,
                  std::optional<std::size_t> points, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = base_config(c);
    SweepSpec spec{.variable = SweepVariable::TauC,
                   .values = cfg.sweep_values,
                   .base = cfg.protocol,
                   .base_decoherence = cfg.decoherence,
                   .samples_per_run = cfg.sweep_samples,
                   .integrator = cfg.run.integrator};
    if (spec.values.empty() || lo || hi || points) {
        spec.values = log_spaced(lo.value_or(0.1), hi.value_or(50.0), points.value_or(40));
    }

    const SweepResult result = sweep_tau(spec, serial ? Execution::Serial : Execution::Parallel);
    emit(cfg.output, out, [&](std::ostream& os) { write_sweep_table(os, result); });
    return report_rows(result, err);
}

int run_sweep_gamma(const Common& c, const std::string& channel_name, bool serial, std::optional<double> lo,
                    std::optional<double> hi, std::optional<std::size_t> points, std::ostream& out,
                    std::ostream& err) {
    const RunConfig cfg = base_config(c);
    DecoherenceChannel channel = cfg.channel;
    if (!channel_name.empty()) {
        const auto ch = parse_channel(channel_name);
        if (!ch) throw ValidationError("option '--channel' must be dissipation or dephasing (got " + channel_name + ")");
        channel = *ch;
    }
    SweepSpec spec{.variable = channel == DecoherenceChannel::Dissipation ? SweepVariable::GammaMinus
                                                                          : SweepVariable::GammaZ,
                   .values = cfg.sweep_values,
                   .base = cfg.protocol,
                   .base_decoherence = {},
                   .samples_per_run = cfg.sweep_samples,
                   .integrator = cfg.run.integrator};
    if (spec.values.empty() || lo || hi || points) {
        spec.values = log_spaced(lo.value_or(1e-4), hi.value_or(1e-1), points.value_or(40));
    }

    const SweepResult result =
        sweep_gamma(spec, channel, serial ? Execution::Serial : Execution::Parallel, cfg.gamma_times);
    emit(cfg.output, out, [&](std::ostream& os) { write_sweep_table(os, result); });
    return report_rows(result, err);
}

int run_emit_pulses(const Common& c, std::ostream& out) {
    const RunConfig cfg = base_config(c);
    const auto& pulse = cfg.protocol.pulse;
    const TimeGrid grid = charging_grid(pulse.tau_c(), cfg.run.samples, cfg.run.horizon);
    const auto rows = tabulate_pulses(pulse, grid);
    emit(cfg.output, out, [&](std::ostream& os) { write_pulse_table(os, rows, pulse.omega0()); });
    return 0;
}

int run_check_cd(const Common& c, std::optional<double> dt_fraction, std::ostream& out) {
    const RunConfig cfg = base_config(c);
    ProtocolSpec spec = cfg.protocol;
    spec.protocol = Protocol::STA;
    const double frac = dt_fraction.value_or(cfg.cd_dt_fraction);
    if (!(frac > 0.0)) throw ValidationError("option '--dt' must be > 0");
    const double tau_c = spec.pulse.tau_c();
    const std::size_t n = c.samples.value_or(201);
    const TimeGrid grid = TimeGrid::uniform(0.0, tau_c, n);

    const auto report = verify_cd_consistency(spec, grid, frac * tau_c);
    const auto halved = verify_cd_consistency(spec, grid, 0.5 * frac * tau_c);
    const double threshold = 1e-6 * spec.pulse.omega0();
    const bool pass = report.max_error <= threshold;

    out << "family = " << to_string(spec.pulse.family()) << '\n'
        << "omega0_tau_c = " << format_number(spec.pulse.omega0_tau_c()) << '\n'
        << "dt_over_tau_c = " << format_number(frac) << '\n'
        << "points_evaluated = " << report.evaluated << '\n'
        << "points_skipped = " << report.skipped << '\n'
        << "max_error = " << format_number(report.max_error / spec.pulse.omega0()) << '\n'
        << "omega0_t_of_max = " << format_number(report.time_of_max * spec.pulse.omega0()) << '\n'
        << "max_error_half_dt = " << format_number(halved.max_error / spec.pulse.omega0()) << '\n'
        << "threshold = " << format_number(1e-6) << '\n'
        << "result = " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? 0 : 2;
}

int run_check_frame(const Common& c, std::ostream& out) {
    const RunConfig cfg = base_config(c);
    const auto& pulse = cfg.protocol.pulse;
    const std::size_t n = c.samples.value_or(401);
    const auto report = verify_frame_equivalence(pulse, n, cfg.run.integrator);
    const bool pass = report.max_deviation <= 1e-5;

    out << "family = " << to_string(pulse.family()) << '\n'
        << "omega0_tau_c = " << format_number(pulse.omega0_tau_c()) << '\n'
        << "max_deviation = " << format_number(report.max_deviation) << '\n'
        << "final_phi = " << format_number(report.final_phi) << '\n'
        << "p3_final_mapped = " << format_number(report.final_populations_mapped[2]) << '\n'
        << "p3_final_rotated_frame = " << format_number(report.final_populations_rotated[2]) << '\n'
        << "threshold = " << format_number(1e-5) << '\n'
        << "result = " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? 0 : 2;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-level quantum battery charging: STIRAP and counter-diabatic driving", "stacharge"};
    app.require_subcommand(0, 1);

    Common simulate_opts, tau_opts, gamma_opts, pulses_opts, cd_opts, frame_opts;
    bool serial = false;
    std::optional<double> lo, hi, dt_fraction;
    std::optional<std::size_t> points;
    std::string channel;

    auto* simulate = app.add_subcommand("simulate", "run one protocol and write its trajectory");
    add_common(simulate, simulate_opts);

    auto* sweep_tau_cmd = app.add_subcommand("sweep-tau", "stored energy and power versus charging time");
    add_common(sweep_tau_cmd, tau_opts);
    sweep_tau_cmd->add_option("--min", lo, "smallest omega0*tau_c (default 0.1)");
    sweep_tau_cmd->add_option("--max", hi, "largest omega0*tau_c (default 50)");
    sweep_tau_cmd->add_option("--points", points, "number of log-spaced points (default 40)");
    sweep_tau_cmd->add_flag("--serial", serial, "use the serial reference loop");

    auto* sweep_gamma_cmd = app.add_subcommand("sweep-gamma", "final stored energy versus decoherence rate");
    add_common(sweep_gamma_cmd, gamma_opts);
    sweep_gamma_cmd->add_option("--channel", channel, "dissipation or dephasing");
    sweep_gamma_cmd->add_option("--min", lo, "smallest gamma/omega0 (default 1e-4)");
    sweep_gamma_cmd->add_option("--max", hi, "largest gamma/omega0 (default 1e-1)");
    sweep_gamma_cmd->add_option("--points", points, "number of log-spaced points (default 40)");
    sweep_gamma_cmd->add_flag("--serial", serial, "use the serial reference loop");

    auto* pulses_cmd = app.add_subcommand("emit-pulses", "tabulate the driving pulses");
    add_common(pulses_cmd, pulses_opts);

    auto* cd_cmd = app.add_subcommand("check-cd", "compare numeric and analytic counter-diabatic terms");
    add_common(cd_cmd, cd_opts);
    cd_cmd->add_option("--dt", dt_fraction, "central-difference step as a fraction of tau_c (default 1e-5)");

    auto* frame_cmd = app.add_subcommand("check-frame", "verify the rotated-frame equivalence");
    add_common(frame_cmd, frame_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << kUsage;
        return 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(simulate_opts, out);
        if (sweep_tau_cmd->parsed()) return run_sweep_tau(tau_opts, serial, lo, hi, points, out, err);
        if (sweep_gamma_cmd->parsed()) return run_sweep_gamma(gamma_opts, channel, serial, lo, hi, points, out, err);
        if (pulses_cmd->parsed()) return run_emit_pulses(pulses_opts, out);
        if (cd_cmd->parsed()) return run_check_cd(cd_opts, dt_fraction, out);
        if (frame_cmd->parsed()) return run_check_frame(frame_opts, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    err << kUsage;
    return 1;
}

}  // namespace stacharge::cli
