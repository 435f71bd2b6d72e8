#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stacharge/hamiltonian.hpp"
#include "stacharge/metrics.hpp"
#include "stacharge/propagator.hpp"

namespace stacharge {

struct RunOptions {
    /// Uniform samples on [0, tau_c]; the grid continues with the same spacing up to
    /// horizon * tau_c.
    std::size_t samples = 1000;
    double horizon = 1.0;
    IntegratorOptions integrator;
};

struct RunResult {
    Trajectory trajectory;
    /// Metrics at t = tau_c.
    ChargeReport report;
    /// Index of the t = tau_c sample in the trajectory.
    std::size_t charge_index = 0;
};

/// Closed-system propagation when both rates vanish, Lindblad otherwise; the battery starts
/// empty in |e1>. STA_Rotated runs are integrated in the rotated frame and mapped back with
/// U(t), so the returned trajectory is always in the original frame.
RunResult run_protocol(const ProtocolSpec& spec, const DecoherenceSpec& dec, const RunOptions& options = {});

/// Grid used by run_protocol.
TimeGrid charging_grid(double tau_c, std::size_t samples, double horizon);

std::vector<double> log_spaced(double lo, double hi, std::size_t n);

enum class SweepVariable { TauC, GammaMinus, GammaZ };
enum class DecoherenceChannel { Dissipation, Dephasing };
enum class Execution { Serial, Parallel };

std::string_view to_string(SweepVariable v);
std::string_view to_string(DecoherenceChannel c);
std::optional<DecoherenceChannel> parse_channel(std::string_view name);

struct SweepSpec {
    SweepVariable variable = SweepVariable::TauC;
    /// omega0 * tau_c for tau sweeps, gamma / omega0 for rate sweeps.
    std::vector<double> values;
    ProtocolSpec base;
    DecoherenceSpec base_decoherence;
    std::size_t samples_per_run = 200;
    IntegratorOptions integrator;

    /// Throws ValidationError unless values are nonempty, ascending and nonnegative and
    /// samples_per_run >= 100.
    void validate() const;
};

struct ProtocolOutcome {
    ChargeReport report;
    Diagnostics diagnostics;
    bool open = false;
};

struct SweepRow {
    double value = 0.0;
    std::optional<ProtocolOutcome> sta;
    std::optional<ProtocolOutcome> stirap;
    /// Empty when both runs succeeded.
    std::string error;
    /// Set when a run's diagnostics break the propagator invariants.
    bool flagged = false;

    bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
    SweepVariable variable = SweepVariable::TauC;
    std::vector<SweepRow> rows;
};

/// Per-value STIRAP and STA runs at omega0 tau_c = value. Row failures are recorded and the
/// sweep continues. Parallel and serial execution produce identical rows.
SweepResult sweep_tau(const SweepSpec& spec, Execution execution = Execution::Parallel);

/// Charging times used by the decoherence sweep, per protocol.
struct GammaSweepTimes {
    double sta_omega0_tau_c = 7.2;
    double stirap_omega0_tau_c = 50.0;
};

/// Final-time charge versus one decoherence rate, with the other channel forced off.
SweepResult sweep_gamma(const SweepSpec& spec, DecoherenceChannel channel, Execution execution = Execution::Parallel,
                        const GammaSweepTimes& times = {});

/// Diagnostics check used to flag sweep rows.
bool within_propagator_invariants(const Diagnostics& d, bool open);

struct CdConsistencyReport {
    double max_error = 0.0;
    double time_of_max = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

/// Max over the grid of ||H_CD,numeric - H_CD,analytic||_F, where the numeric side comes from
/// the two-pulse Hamiltonian. Points with Omega below 1e-8 omega0 are skipped.
CdConsistencyReport verify_cd_consistency(const ProtocolSpec& spec, const TimeGrid& grid, double dt);

/// Generic form: h is the reference Hamiltonian, analytic_cd the expected CD term, and
/// skip(t) marks points to leave out.
CdConsistencyReport verify_cd_consistency(const HamiltonianFn& h, const HamiltonianFn& analytic_cd,
                                          const TimeGrid& grid, double dt,
                                          const std::function<bool(double)>& skip = {});

struct FrameEquivalenceReport {
    /// max_t || psi_rot(t) - U^+(t) psi(t) ||
    double max_deviation = 0.0;
    /// Final populations of U(tau_c) psi_rot(tau_c), i.e. mapped back to the original frame.
    std::array<double, 3> final_populations_mapped{};
    /// Final populations of psi_rot itself.
    std::array<double, 3> final_populations_rotated{};
    double final_phi = 0.0;
};

/// Propagates the STA Hamiltonian and its frame-rotated counterpart from |e1> and compares.
FrameEquivalenceReport verify_frame_equivalence(const PulseSpec& pulse, std::size_t samples,
                                                const IntegratorOptions& integrator = {});

struct PulseTableRow {
    double t;
    double omega1;
    double omega2;
    double omega_a;
    /// NaN where the rotation angle is undefined.
    double omega1_tilde;
    double omega2_tilde;
    double phi;
};

std::vector<PulseTableRow> tabulate_pulses(const PulseSpec& pulse, const TimeGrid& grid);

}  // namespace stacharge
