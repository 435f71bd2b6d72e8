#pragma once

#include <array>
#include <vector>

#include "stacharge/propagator.hpp"
#include "stacharge/types.hpp"

namespace stacharge {

/// Final-time charging figures of merit. Energies are in units of W_max = omega_3.
struct ChargeReport {
    /// Tr(rho H0) / W_max = r p2 + p3 (the empty state has zero energy).
    double W_norm = 0.0;
    /// Occupation of the fully charged level, p3.
    double W_charged = 0.0;
    /// W_norm / (omega0 tau_c).
    double P_avg = 0.0;
    /// W_charged / (omega0 tau_c).
    double P_avg_charged = 0.0;
    std::array<double, 3> populations{};
};

/// Tr(rho diag(0, r, 1)).
double stored_energy(const Mat3& rho, double level_ratio);
double stored_energy(const std::array<double, 3>& populations, double level_ratio);

/// W_norm / (omega0 tau_c). Throws ValidationError when tau_c <= 0 or omega0 <= 0.
double avg_power(double W_norm, double omega0, double tau_c);

/// dW_norm/dt on the trajectory grid: central differences inside, one-sided at the ends.
/// Throws ValidationError for fewer than three samples.
std::vector<double> instantaneous_power(const Trajectory& trajectory, double level_ratio);

/// Stored energy at every sample.
std::vector<double> energy_series(const Trajectory& trajectory, double level_ratio);

ChargeReport charge_report(const std::array<double, 3>& final_populations, double level_ratio, double omega0,
                           double tau_c);

}  // namespace stacharge
