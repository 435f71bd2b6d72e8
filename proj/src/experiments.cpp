#include "stacharge/experiments.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "row_kernels.hpp"
#include "stacharge/cd_numeric.hpp"
#include "stacharge/errors.hpp"

namespace stacharge {

namespace {

std::string run_label(const ProtocolSpec& spec, const DecoherenceSpec& dec) {
    std::ostringstream os;
    os << to_string(spec.protocol) << "/" << to_string(spec.pulse.family())
       << " omega0_tau_c=" << spec.pulse.omega0_tau_c() << " gamma_minus=" << dec.gamma_minus
       << " gamma_z=" << dec.gamma_z;
    return os.str();
}

void map_back_from_rotated_frame(const PulseSpec& pulse, Trajectory& traj) {
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Mat3 u = rotation_frame_U(rotation_angle(pulse, traj.times[i]));
        if (traj.is_open()) {
            Mat3& rho = traj.density_matrices[i];
            rho = u * rho * u.adjoint();
            traj.populations[i] = {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
        } else {
            Vec3& psi = traj.pure_states[i];
            psi = u * psi;
            traj.populations[i] = {std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2))};
        }
    }
}

ProtocolOutcome outcome_of(const RunResult& run) {
    return {run.report, run.trajectory.diagnostics, run.trajectory.is_open()};
}

void dispatch(Execution execution, std::size_t n, const std::function<void(std::size_t)>& body) {
    if (execution == Execution::Parallel) {
        detail::for_each_row_parallel(n, body);
    } else {
        detail::for_each_row_serial(n, body);
    }
}

void finish_row(SweepRow& row) {
    for (const auto* o : {&row.sta, &row.stirap}) {
        if (o->has_value() && !within_propagator_invariants((*o)->diagnostics, (*o)->open)) row.flagged = true;
    }
}

}  // namespace

TimeGrid charging_grid(double tau_c, std::size_t samples, double horizon) {
    if (samples < 2) throw ValidationError("run needs at least two samples");
    if (!(horizon >= 1.0) || !std::isfinite(horizon)) throw ValidationError("field 'horizon' must be >= 1");
    std::vector<double> t(samples);
    const double dt = tau_c / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) t[i] = tau_c * static_cast<double>(i) / static_cast<double>(samples - 1);
    t.back() = tau_c;
    if (horizon > 1.0) {
        const double t_end = horizon * tau_c;
        const auto extra = static_cast<std::size_t>(std::ceil((t_end - tau_c) / dt - 1e-9));
        for (std::size_t k = 1; k < extra; ++k) t.push_back(tau_c + static_cast<double>(k) * dt);
        t.push_back(t_end);
    }
    return TimeGrid(std::move(t));
}

RunResult run_protocol(const ProtocolSpec& spec, const DecoherenceSpec& dec, const RunOptions& options) {
    spec.validate();
    dec.validate();
    options.integrator.validate();

    const double tau_c = spec.pulse.tau_c();
    const TimeGrid grid = charging_grid(tau_c, options.samples, options.horizon);
    const HamiltonianFn h = make_hamiltonian(spec);
    const bool rotated = spec.protocol == Protocol::STA_Rotated;

    RunResult result;
    try {
        if (dec.closed()) {
            Vec3 psi0 = basis_state(1);
            if (rotated) psi0 = rotation_frame_U(rotation_angle(spec.pulse, 0.0)).adjoint() * psi0;
            result.trajectory = propagate_pure(h, PureState::from(psi0), grid, options.integrator);
        } else {
            Mat3 rho0 = projector(basis_state(1));
            if (rotated) {
                const Mat3 u0 = rotation_frame_U(rotation_angle(spec.pulse, 0.0));
                rho0 = u0.adjoint() * rho0 * u0;
            }
            result.trajectory =
                propagate_lindblad(h, DensityMatrix::from(rho0), dec, grid, options.integrator);
        }
        if (rotated) map_back_from_rotated_frame(spec.pulse, result.trajectory);
    } catch (const NumericalError& e) {
        throw NumericalError(e.kind(), run_label(spec, dec) + ": " + e.what());
    }

    result.charge_index = options.samples - 1;
    result.report = charge_report(result.trajectory.populations[result.charge_index], spec.level_ratio,
                                  spec.pulse.omega0(), tau_c);
    return result;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi >= lo) || n == 0) throw ValidationError("log-spaced grid needs 0 < lo <= hi and n >= 1");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::TauC: return "tau_c";
        case SweepVariable::GammaMinus: return "gamma_minus";
        case SweepVariable::GammaZ: return "gamma_z";
    }
    return "?";
}

std::string_view to_string(DecoherenceChannel c) {
    return c == DecoherenceChannel::Dissipation ? "dissipation" : "dephasing";
}

std::optional<DecoherenceChannel> parse_channel(std::string_view name) {
    if (name == "dissipation") return DecoherenceChannel::Dissipation;
    if (name == "dephasing") return DecoherenceChannel::Dephasing;
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (values.empty()) throw ValidationError("sweep field 'values' must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            std::ostringstream os;
            os << "sweep field 'values' must be nonnegative (got " << values[i] << ")";
            throw ValidationError(os.str());
        }
        if (i > 0 && !(values[i] > values[i - 1])) throw ValidationError("sweep field 'values' must be ascending");
    }
    if (variable == SweepVariable::TauC && values.front() <= 0.0) {
        throw ValidationError("sweep field 'values' must be > 0 for a tau_c sweep");
    }
    if (samples_per_run < 100) throw ValidationError("sweep field 'samples_per_run' must be >= 100");
    base.validate();
    base_decoherence.validate();
    integrator.validate();
}

bool within_propagator_invariants(const Diagnostics& d, bool open) {
    if (open) return d.max_trace_drift <= 1e-7 && d.min_eigenvalue >= -1e-6;
    return d.max_norm_drift <= 1e-8;
}

SweepResult sweep_tau(const SweepSpec& spec, Execution execution) {
    if (spec.variable != SweepVariable::TauC) throw ValidationError("sweep_tau needs variable = tau_c");
    spec.validate();

    SweepResult result;
    result.variable = spec.variable;
    result.rows.resize(spec.values.size());

    const RunOptions options{spec.samples_per_run, 1.0, spec.integrator};
    dispatch(execution, spec.values.size(), [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        row.value = spec.values[i];
        try {
            ProtocolSpec p = spec.base;
            p.pulse = spec.base.pulse.with_tau_c(row.value / spec.base.pulse.omega0());
            p.protocol = Protocol::STA;
            row.sta = outcome_of(run_protocol(p, spec.base_decoherence, options));
            p.protocol = Protocol::STIRAP;
            row.stirap = outcome_of(run_protocol(p, spec.base_decoherence, options));
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        finish_row(row);
    });
    return result;
}

SweepResult sweep_gamma(const SweepSpec& spec, DecoherenceChannel channel, Execution execution,
                        const GammaSweepTimes& times) {
    if (spec.variable == SweepVariable::TauC) throw ValidationError("sweep_gamma needs a rate variable");
    spec.validate();

    SweepResult result;
    result.variable = spec.variable;
    result.rows.resize(spec.values.size());

    const RunOptions options{spec.samples_per_run, 1.0, spec.integrator};
    const double omega0 = spec.base.pulse.omega0();
    dispatch(execution, spec.values.size(), [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        row.value = spec.values[i];
        try {
            DecoherenceSpec dec;
            if (channel == DecoherenceChannel::Dissipation) {
                dec.gamma_minus = row.value * omega0;
            } else {
                dec.gamma_z = row.value * omega0;
            }
            ProtocolSpec p = spec.base;
            p.protocol = Protocol::STA;
            p.pulse = spec.base.pulse.with_tau_c(times.sta_omega0_tau_c / omega0);
            row.sta = outcome_of(run_protocol(p, dec, options));
            p.protocol = Protocol::STIRAP;
            p.pulse = spec.base.pulse.with_tau_c(times.stirap_omega0_tau_c / omega0);
            row.stirap = outcome_of(run_protocol(p, dec, options));
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        finish_row(row);
    });
    return result;
}

CdConsistencyReport verify_cd_consistency(const HamiltonianFn& h, const HamiltonianFn& analytic_cd,
                                          const TimeGrid& grid, double dt,
                                          const std::function<bool(double)>& skip) {
    if (!(dt > 0.0)) throw ValidationError("field 'dt' must be > 0");
    CdConsistencyReport report;
    for (double t : grid.times()) {
        if (skip && skip(t)) {
            ++report.skipped;
            continue;
        }
        const double err = (compute_hcd_numeric(h, t, dt) - analytic_cd(t)).norm();
        ++report.evaluated;
        if (err > report.max_error) {
            report.max_error = err;
            report.time_of_max = t;
        }
    }
    return report;
}

CdConsistencyReport verify_cd_consistency(const ProtocolSpec& spec, const TimeGrid& grid, double dt) {
    spec.validate();
    if (spec.protocol == Protocol::STIRAP) throw ValidationError("CD consistency check needs an STA protocol");
    const PulseSpec pulse = spec.pulse;
    const double delta = spec.detuning;
    const HamiltonianFn h = [pulse, delta](double t) {
        const auto [o1, o2] = eval_pair(pulse, t);
        return build_stirap(o1, o2, delta);
    };
    const HamiltonianFn cd = [pulse](double t) { return build_sta(0.0, 0.0, eval_cd_analytic(pulse, t), 0.0); };
    const double floor = 1e-8 * pulse.omega0();
    const auto skip = [pulse, floor, dt](double t) {
        for (double s : {t - dt, t, t + dt}) {
            const auto [o1, o2] = eval_pair(pulse, s);
            if (std::hypot(o1, o2) < floor) return true;
        }
        return false;
    };
    return verify_cd_consistency(h, cd, grid, dt, skip);
}

FrameEquivalenceReport verify_frame_equivalence(const PulseSpec& pulse, std::size_t samples,
                                                const IntegratorOptions& integrator) {
    const TimeGrid grid = TimeGrid::uniform(0.0, pulse.tau_c(), samples);
    const ProtocolSpec sta{Protocol::STA, pulse};
    const ProtocolSpec rot{Protocol::STA_Rotated, pulse};

    const Trajectory lab = propagate_pure(make_hamiltonian(sta), PureState::ground(), grid, integrator);
    const Mat3 u0 = rotation_frame_U(rotation_angle(pulse, 0.0));
    const Trajectory frame = propagate_pure(make_hamiltonian(rot), PureState::from(u0.adjoint() * basis_state(1)),
                                            grid, integrator);

    FrameEquivalenceReport report;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Mat3 u = rotation_frame_U(rotation_angle(pulse, grid[i]));
        const double dev = (frame.pure_states[i] - u.adjoint() * lab.pure_states[i]).norm();
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    const std::size_t last = grid.size() - 1;
    report.final_phi = rotation_angle(pulse, grid[last]);
    const Vec3 mapped = rotation_frame_U(report.final_phi) * frame.pure_states[last];
    report.final_populations_mapped = {std::norm(mapped(0)), std::norm(mapped(1)), std::norm(mapped(2))};
    report.final_populations_rotated = frame.populations[last];
    return report;
}

std::vector<PulseTableRow> tabulate_pulses(const PulseSpec& pulse, const TimeGrid& grid) {
    std::vector<PulseTableRow> rows;
    rows.reserve(grid.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double t : grid.times()) {
        const auto s = eval_sample(pulse, t);
        PulseTableRow row{t, s.omega1, s.omega2, s.omega_a, nan, nan, nan};
        try {
            const auto m = modified_pulses(pulse, t);
            row.omega1_tilde = m.omega1_tilde;
            row.omega2_tilde = m.omega2_tilde;
            row.phi = m.phi;
        } catch (const NumericalError&) {
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace stacharge
