#include <cmath>

#include "doctest.h"
#include "stacharge/errors.hpp"
#include "stacharge/experiments.hpp"
#include "stacharge/metrics.hpp"

using namespace stacharge;
using doctest::Approx;

namespace {

Trajectory populations_only(const std::vector<double>& times, const std::vector<std::array<double, 3>>& pops) {
    Trajectory t;
    t.times = times;
    t.populations = pops;
    return t;
}

}  // namespace

TEST_CASE("stored energy of basis states") {
    CHECK(stored_energy(projector(basis_state(1)), 0.3809) == 0.0);
    CHECK(stored_energy(projector(basis_state(3)), 0.3809) == 1.0);
    CHECK(stored_energy(projector(basis_state(2)), 0.3809) == Approx(0.3809));
    CHECK(stored_energy(std::array{0.2, 0.5, 0.3}, 0.4) == Approx(0.5));
}

TEST_CASE("average power") {
    CHECK(avg_power(1.0, 1.0, 7.2) == Approx(0.138888888889));
    CHECK(avg_power(0.0, 1.0, 3.0) == 0.0);
    CHECK(avg_power(1.0, 2.0, 1.0) == 0.5);
    CHECK_THROWS_AS(avg_power(1.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(avg_power(1.0, 1.0, -1.0), ValidationError);
}

TEST_CASE("instantaneous power") {
    std::vector<double> times;
    std::vector<std::array<double, 3>> flat, ramp;
    for (int i = 0; i <= 10; ++i) {
        const double t = 0.5 * i;
        times.push_back(t);
        flat.push_back({0.5, 0.2, 0.3});
        ramp.push_back({1.0 - t / 5.0, 0.0, t / 5.0});
    }
    for (double p : instantaneous_power(populations_only(times, flat), 0.4)) CHECK(p == Approx(0.0).scale(1.0));
    for (double p : instantaneous_power(populations_only(times, ramp), 0.4)) CHECK(p == Approx(0.2));
    CHECK_THROWS_AS(instantaneous_power(populations_only({0.0, 1.0}, {{1, 0, 0}, {1, 0, 0}}), 0.4), ValidationError);
}

TEST_CASE("integrated instantaneous power recovers the final energy") {
    const ProtocolSpec spec{Protocol::STA, PulseSpec::gaussian(1.0, 7.2)};
    const auto run = run_protocol(spec, {}, {.samples = 1000});
    const auto p = instantaneous_power(run.trajectory, spec.level_ratio);
    const auto& t = run.trajectory.times;
    double integral = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) integral += 0.5 * (p[i] + p[i - 1]) * (t[i] - t[i - 1]);
    CHECK(std::abs(integral - run.report.W_norm) <= 1e-3);
}

TEST_CASE("charge report") {
    const auto r = charge_report({0.1, 0.2, 0.7}, 0.5, 2.0, 5.0);
    CHECK(r.W_norm == Approx(0.8));
    CHECK(r.W_charged == Approx(0.7));
    CHECK(r.P_avg == Approx(0.08));
    CHECK(r.P_avg_charged == Approx(0.07));
}
