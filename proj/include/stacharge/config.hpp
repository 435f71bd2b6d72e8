#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

#include "stacharge/experiments.hpp"
#include "stacharge/hamiltonian.hpp"
#include "stacharge/propagator.hpp"

namespace stacharge {

/// Everything a CLI run needs, validated. Times are in units of 1/omega0 and rates in units
/// of omega0.
struct RunConfig {
    explicit RunConfig(ProtocolSpec spec) : protocol(std::move(spec)) {}

    ProtocolSpec protocol;
    DecoherenceSpec decoherence;
    RunOptions run;

    /// Sweep axis (omega0 tau_c or gamma/omega0). Empty means "use the command's default".
    std::vector<double> sweep_values;
    DecoherenceChannel channel = DecoherenceChannel::Dissipation;
    GammaSweepTimes gamma_times;
    std::size_t sweep_samples = 200;

    /// Central-difference step for check-cd, as a fraction of tau_c.
    double cd_dt_fraction = 1e-5;

    std::string output;
    std::string summary;
};

/// Parses a YAML mapping (block or flow style). Keys:
///
///   protocol       STIRAP | STA | STA_Rotated                      (required)
///   family         Gaussian | Sinusoid | Ramp                      (required)
///   omega0_tau_c   dimensionless charging time, > 0                (required)
///   omega0         pulse strength, > 0                             (default 1)
///   alpha, sigma, beta   shape parameters, same time unit as tau_c (defaults tau_c/10, tau_c/6, tau_c/10)
///   detuning       Delta / omega0                                  (default 0)
///   level_ratio    omega_2 / omega_3 in (0, 1)                     (default 0.3809)
///   gamma_minus, gamma_z   rates / omega0, >= 0                    (default 0)
///   samples        grid points on [0, tau_c], >= 3                 (default 1000)
///   horizon        grid end as a multiple of tau_c, >= 1           (default 1)
///   integrator     dopri45 | rk4                                   (default dopri45)
///   rtol, atol, rk4_substeps
///   sweep_values   explicit ascending list
///   sweep_min, sweep_max, sweep_points   log-spaced sweep axis
///   channel        dissipation | dephasing                         (default dissipation)
///   sta_omega0_tau_c, stirap_omega0_tau_c   decoherence-sweep times (default 7.2, 50)
///   sweep_samples  grid points per sweep run, >= 100               (default 200)
///   cd_dt          check-cd step as a fraction of tau_c            (default 1e-5)
///   output, summary   file paths
///
/// Unknown keys are rejected. Throws ValidationError naming the line/column for syntax errors
/// and the field, constraint and offending value for domain errors.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace stacharge
