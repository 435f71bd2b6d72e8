#include "stacharge/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "stacharge/errors.hpp"

namespace stacharge {

namespace {

constexpr std::array kKnownKeys = {
    "protocol",    "family",       "omega0_tau_c",   "omega0",          "alpha",
    "sigma",       "beta",         "detuning",       "level_ratio",     "gamma_minus",
    "gamma_z",     "samples",      "horizon",        "integrator",      "rtol",
    "atol",        "rk4_substeps", "sweep_values",   "sweep_min",       "sweep_max",
    "sweep_points", "channel",     "sta_omega0_tau_c", "stirap_omega0_tau_c", "sweep_samples",
    "cd_dt",       "output",       "summary",
};

constexpr std::array kRequiredKeys = {"protocol", "family", "omega0_tau_c"};

[[noreturn]] void domain_error(const std::string& field, const std::string& constraint, const std::string& got) {
    std::ostringstream os;
    os << "field '" << field << "': " << constraint << " (got " << got << ")";
    throw ValidationError(os.str());
}

std::string where(const YAML::Node& node) {
    const auto m = node.Mark();
    std::ostringstream os;
    os << "line " << m.line + 1 << ", column " << m.column + 1;
    return os.str();
}

class Fields {
public:
    explicit Fields(const YAML::Node& root) : root_(root) {}

    bool has(const char* key) const { return static_cast<bool>(root_[key]); }

    std::string text(const char* key) const {
        const YAML::Node n = root_[key];
        if (!n.IsScalar()) domain_error(key, "must be a scalar", where(n));
        return n.Scalar();
    }

    double real(const char* key) const {
        const YAML::Node n = root_[key];
        if (!n.IsScalar()) domain_error(key, "must be a number", where(n));
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v)) domain_error(key, "must be finite", n.Scalar());
            return v;
        } catch (const YAML::BadConversion&) {
            domain_error(key, "must be a number", "'" + n.Scalar() + "' at " + where(n));
        }
    }

    double real_or(const char* key, double fallback) const { return has(key) ? real(key) : fallback; }

    std::optional<double> maybe_real(const char* key) const {
        if (!has(key)) return std::nullopt;
        return real(key);
    }

    std::size_t count(const char* key, std::size_t fallback, std::size_t minimum) const {
        if (!has(key)) return fallback;
        const double v = real(key);
        if (v != std::floor(v) || v < static_cast<double>(minimum)) {
            std::ostringstream os;
            os << "must be an integer >= " << minimum;
            domain_error(key, os.str(), root_[key].Scalar());
        }
        return static_cast<std::size_t>(v);
    }

    std::vector<double> list(const char* key) const {
        const YAML::Node n = root_[key];
        if (!n.IsSequence()) domain_error(key, "must be a list of numbers", where(n));
        std::vector<double> out;
        for (const auto& item : n) {
            try {
                out.push_back(item.as<double>());
            } catch (const YAML::BadConversion&) {
                domain_error(key, "must be a list of numbers", "'" + item.Scalar() + "' at " + where(item));
            }
        }
        return out;
    }

private:
    YAML::Node root_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << "config syntax error at line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": " << e.msg;
        throw ValidationError(os.str());
    }

    if (root.IsNull() || (root.IsMap() && root.size() == 0)) {
        throw ValidationError("config is empty; required fields: protocol, family, omega0_tau_c");
    }
    if (!root.IsMap()) throw ValidationError("config must be a key/value mapping (" + where(root) + ")");

    for (const auto& kv : root) {
        const std::string key = kv.first.as<std::string>();
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw ValidationError("unknown config key '" + key + "' at " + where(kv.first));
        }
    }

    std::vector<std::string> missing;
    for (const char* key : kRequiredKeys) {
        if (!root[key]) missing.emplace_back(key);
    }
    if (!missing.empty()) {
        std::string msg = "missing required fields:";
        for (const auto& m : missing) msg += " " + m;
        throw ValidationError(msg);
    }

    const Fields f(root);

    const std::string protocol_name = f.text("protocol");
    const auto protocol = parse_protocol(protocol_name);
    if (!protocol) domain_error("protocol", "must be one of STIRAP, STA, STA_Rotated", protocol_name);

    const std::string family_name = f.text("family");
    const auto family = parse_pulse_family(family_name);
    if (!family) domain_error("family", "must be one of Gaussian, Sinusoid, Ramp", family_name);

    const double omega0 = f.real_or("omega0", 1.0);
    if (!(omega0 > 0.0)) domain_error("omega0", "must be > 0", fmt(omega0));
    const double omega0_tau_c = f.real("omega0_tau_c");
    if (!(omega0_tau_c > 0.0)) domain_error("omega0_tau_c", "must be > 0", fmt(omega0_tau_c));

    PulseShape shape{f.maybe_real("alpha"), f.maybe_real("sigma"), f.maybe_real("beta")};
    if (shape.sigma && !(*shape.sigma > 0.0)) domain_error("sigma", "must be > 0", fmt(*shape.sigma));

    RunConfig cfg(ProtocolSpec{*protocol, PulseSpec(*family, omega0, omega0_tau_c / omega0, shape)});

    cfg.protocol.detuning = f.real_or("detuning", 0.0) * omega0;
    cfg.protocol.level_ratio = f.real_or("level_ratio", kDefaultLevelRatio);
    if (!(cfg.protocol.level_ratio > 0.0 && cfg.protocol.level_ratio < 1.0)) {
        domain_error("level_ratio", "must lie in (0, 1)", fmt(cfg.protocol.level_ratio));
    }
    cfg.protocol.validate();

    const double gm = f.real_or("gamma_minus", 0.0);
    const double gz = f.real_or("gamma_z", 0.0);
    if (gm < 0.0) domain_error("gamma_minus", "must be >= 0", fmt(gm));
    if (gz < 0.0) domain_error("gamma_z", "must be >= 0", fmt(gz));
    cfg.decoherence = {gm * omega0, gz * omega0};

    cfg.run.samples = f.count("samples", 1000, 3);
    cfg.run.horizon = f.real_or("horizon", 1.0);
    if (!(cfg.run.horizon >= 1.0)) domain_error("horizon", "must be >= 1", fmt(cfg.run.horizon));

    if (f.has("integrator")) {
        const std::string m = f.text("integrator");
        if (m == "dopri45") {
            cfg.run.integrator.method = IntegratorMethod::DormandPrince45;
        } else if (m == "rk4") {
            cfg.run.integrator.method = IntegratorMethod::FixedRK4;
        } else {
            domain_error("integrator", "must be dopri45 or rk4", m);
        }
    }
    cfg.run.integrator.rtol = f.real_or("rtol", cfg.run.integrator.rtol);
    if (!(cfg.run.integrator.rtol >= 1e-12 && cfg.run.integrator.rtol <= 1e-6)) {
        domain_error("rtol", "must lie in [1e-12, 1e-6]", fmt(cfg.run.integrator.rtol));
    }
    cfg.run.integrator.atol = f.real_or("atol", cfg.run.integrator.atol);
    if (!(cfg.run.integrator.atol > 0.0)) domain_error("atol", "must be > 0", fmt(cfg.run.integrator.atol));
    cfg.run.integrator.rk4_substeps = static_cast<int>(f.count("rk4_substeps", 64, 1));

    if (f.has("sweep_values")) {
        cfg.sweep_values = f.list("sweep_values");
        for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
            if (cfg.sweep_values[i] < 0.0) domain_error("sweep_values", "must be nonnegative", fmt(cfg.sweep_values[i]));
            if (i > 0 && !(cfg.sweep_values[i] > cfg.sweep_values[i - 1])) {
                domain_error("sweep_values", "must be strictly ascending", fmt(cfg.sweep_values[i]));
            }
        }
        if (cfg.sweep_values.empty()) domain_error("sweep_values", "must be nonempty", "[]");
    } else if (f.has("sweep_min") || f.has("sweep_max") || f.has("sweep_points")) {
        const double lo = f.real("sweep_min");
        const double hi = f.real("sweep_max");
        if (!(lo > 0.0)) domain_error("sweep_min", "must be > 0", fmt(lo));
        if (!(hi >= lo)) domain_error("sweep_max", "must be >= sweep_min", fmt(hi));
        cfg.sweep_values = log_spaced(lo, hi, f.count("sweep_points", 40, 1));
    }

    if (f.has("channel")) {
        const std::string c = f.text("channel");
        const auto ch = parse_channel(c);
        if (!ch) domain_error("channel", "must be dissipation or dephasing", c);
        cfg.channel = *ch;
    }
    cfg.gamma_times.sta_omega0_tau_c = f.real_or("sta_omega0_tau_c", cfg.gamma_times.sta_omega0_tau_c);
    cfg.gamma_times.stirap_omega0_tau_c = f.real_or("stirap_omega0_tau_c", cfg.gamma_times.stirap_omega0_tau_c);
    if (!(cfg.gamma_times.sta_omega0_tau_c > 0.0)) {
        domain_error("sta_omega0_tau_c", "must be > 0", fmt(cfg.gamma_times.sta_omega0_tau_c));
    }
    if (!(cfg.gamma_times.stirap_omega0_tau_c > 0.0)) {
        domain_error("stirap_omega0_tau_c", "must be > 0", fmt(cfg.gamma_times.stirap_omega0_tau_c));
    }
    cfg.sweep_samples = f.count("sweep_samples", 200, 100);

    cfg.cd_dt_fraction = f.real_or("cd_dt", cfg.cd_dt_fraction);
    if (!(cfg.cd_dt_fraction > 0.0)) domain_error("cd_dt", "must be > 0", fmt(cfg.cd_dt_fraction));

    if (f.has("output")) cfg.output = f.text("output");
    if (f.has("summary")) cfg.summary = f.text("summary");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace stacharge
