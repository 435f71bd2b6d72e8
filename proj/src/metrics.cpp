#include "stacharge/metrics.hpp"

#include <cmath>
#include <sstream>

#include "stacharge/errors.hpp"
#include "stacharge/hamiltonian.hpp"

namespace stacharge {

double stored_energy(const Mat3& rho, double level_ratio) {
    const Eigen::Matrix3d h0 = bare_h0(level_ratio);
    return (rho * h0.cast<Complex>()).trace().real();
}

double stored_energy(const std::array<double, 3>& populations, double level_ratio) {
    return level_ratio * populations[1] + populations[2];
}

double avg_power(double W_norm, double omega0, double tau_c) {
    if (!(tau_c > 0.0)) {
        std::ostringstream os;
        os << "average power needs tau_c > 0 (got " << tau_c << ")";
        throw ValidationError(os.str());
    }
    if (!(omega0 > 0.0)) throw ValidationError("average power needs omega0 > 0");
    return W_norm / (omega0 * tau_c);
}

std::vector<double> energy_series(const Trajectory& trajectory, double level_ratio) {
    std::vector<double> w(trajectory.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = stored_energy(trajectory.populations[i], level_ratio);
    return w;
}

std::vector<double> instantaneous_power(const Trajectory& trajectory, double level_ratio) {
    const std::size_t n = trajectory.size();
    if (n < 3) throw ValidationError("instantaneous power needs at least three samples");
    const auto w = energy_series(trajectory, level_ratio);
    const auto& t = trajectory.times;

    std::vector<double> p(n);
    p[0] = (w[1] - w[0]) / (t[1] - t[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) p[i] = (w[i + 1] - w[i - 1]) / (t[i + 1] - t[i - 1]);
    p[n - 1] = (w[n - 1] - w[n - 2]) / (t[n - 1] - t[n - 2]);
    return p;
}

ChargeReport charge_report(const std::array<double, 3>& final_populations, double level_ratio, double omega0,
                           double tau_c) {
    ChargeReport r;
    r.populations = final_populations;
    r.W_norm = stored_energy(final_populations, level_ratio);
    r.W_charged = final_populations[2];
    r.P_avg = avg_power(r.W_norm, omega0, tau_c);
    r.P_avg_charged = avg_power(r.W_charged, omega0, tau_c);
    return r;
}

}  // namespace stacharge
