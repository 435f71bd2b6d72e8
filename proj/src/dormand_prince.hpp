#pragma once

// Internal ODE kernels shared by the pure-state and master-equation propagators.
// State is any fixed-size Eigen complex matrix or vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>

#include "stacharge/errors.hpp"
#include "stacharge/propagator.hpp"

namespace stacharge::detail {

template <class State>
bool all_finite(const State& y) {
    return y.array().isFinite().all();
}

template <class State>
void require_finite_state(const State& y, double t) {
    if (!all_finite(y)) {
        std::ostringstream os;
        os << "propagation diverged: non-finite state at t = " << t;
        throw NumericalError(NumericalError::Kind::Divergence, os.str());
    }
}

/// Adaptive Dormand-Prince 5(4) with the standard fourth-order continuous extension.
/// after_step(y, t) may modify the freshly accepted state; sample(i, y) receives the state at
/// grid point i (grid[0] receives y0 unchanged).
template <class State, class Rhs, class AfterStep, class Sample>
void integrate_dopri(Rhs&& f, State y, std::span<const double> grid, const IntegratorOptions& opt,
                     Diagnostics& diag, AfterStep&& after_step, Sample&& sample) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                     d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                     d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

    const double t_end = grid.back();
    double t = grid.front();
    sample(0, y);
    std::size_t next = 1;

    double h = 1e-4 * (t_end - t);
    double err_prev = 1e-4;

    while (next < grid.size()) {
        if (diag.accepted_steps + diag.rejected_steps >= opt.max_steps) {
            throw NumericalError(NumericalError::Kind::Stiffness, "propagation exceeded the step budget");
        }
        const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < min_h) {
            std::ostringstream os;
            os << "step size underflow (h = " << h << ") at t = " << t;
            throw NumericalError(NumericalError::Kind::Stiffness, os.str());
        }
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }

        const State k1 = f(t, y);
        const State k2 = f(t + c2 * h, (y + h * (a21 * k1)).eval());
        const State k3 = f(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
        const State k4 = f(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        const State k5 = f(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        const State k6 = f(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
        const State y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const State k7 = f(t + h, y1);
        const State err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const auto scale = opt.atol + opt.rtol * y.array().abs().max(y1.array().abs());
        const double err = std::sqrt((err_vec.array().abs() / scale).square().mean());
        if (!std::isfinite(err)) {
            require_finite_state(y1, t + h);
            throw NumericalError(NumericalError::Kind::Divergence, "non-finite error estimate");
        }

        if (err <= 1.0) {
            ++diag.accepted_steps;
            const double t1 = last ? t_end : t + h;

            // Dense output on (t, t1].
            const State ydiff = y1 - y;
            const State bspl = h * k1 - ydiff;
            const State r4 = ydiff - h * k7 - bspl;
            const State r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (next < grid.size() && grid[next] <= t1) {
                if (grid[next] == t1) {
                    sample(next, y1);
                } else {
                    const double s = (grid[next] - t) / h;
                    const double s1 = 1.0 - s;
                    const State yi = y + s * (ydiff + s1 * (bspl + s * (r4 + s1 * r5)));
                    sample(next, yi);
                }
                ++next;
            }

            y = y1;
            t = t1;
            require_finite_state(y, t);
            after_step(y, t);

            // PI step-size control.
            const double e = std::max(err, 1e-10);
            double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-4);
            h *= fac;
        } else {
            ++diag.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
        }
    }
}

/// Classical RK4 with rk4_substeps equal steps per grid interval.
template <class State, class Rhs, class AfterStep, class Sample>
void integrate_rk4(Rhs&& f, State y, std::span<const double> grid, const IntegratorOptions& opt,
                   Diagnostics& diag, AfterStep&& after_step, Sample&& sample) {
    sample(0, y);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t0 = grid[i - 1];
        const double h = (grid[i] - t0) / opt.rk4_substeps;
        for (int s = 0; s < opt.rk4_substeps; ++s) {
            const double t = t0 + s * h;
            const State k1 = f(t, y);
            const State k2 = f(t + 0.5 * h, (y + 0.5 * h * k1).eval());
            const State k3 = f(t + 0.5 * h, (y + 0.5 * h * k2).eval());
            const State k4 = f(t + h, (y + h * k3).eval());
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            ++diag.accepted_steps;
            require_finite_state(y, t + h);
            after_step(y, t + h);
        }
        sample(i, y);
    }
}

}  // namespace stacharge::detail
