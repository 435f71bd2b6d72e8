#include <cmath>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "stacharge/errors.hpp"
#include "stacharge/experiments.hpp"

using namespace stacharge;
using doctest::Approx;

namespace {

ProtocolSpec gaussian(Protocol p, double wt) { return {p, PulseSpec::gaussian(1.0, wt)}; }

SweepSpec tau_sweep(std::vector<double> values, PulseFamily family = PulseFamily::Gaussian) {
    return {.variable = SweepVariable::TauC,
            .values = std::move(values),
            .base = {Protocol::STA, PulseSpec(family, 1.0, 7.2)},
            .base_decoherence = {},
            .samples_per_run = 200,
            .integrator = {}};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool identical(const SweepResult& a, const SweepResult& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (!same_bits(x.value, y.value) || x.error != y.error || x.flagged != y.flagged) return false;
        for (auto pick : {&SweepRow::sta, &SweepRow::stirap}) {
            const auto& ox = x.*pick;
            const auto& oy = y.*pick;
            if (ox.has_value() != oy.has_value()) return false;
            if (!ox) continue;
            for (int k = 0; k < 3; ++k) {
                if (!same_bits(ox->report.populations[k], oy->report.populations[k])) return false;
            }
            if (!same_bits(ox->report.W_norm, oy->report.W_norm)) return false;
            if (ox->diagnostics.accepted_steps != oy->diagnostics.accepted_steps) return false;
        }
    }
    return true;
}

double max_p2(const Trajectory& t) {
    double m = 0.0;
    for (const auto& p : t.populations) m = std::max(m, p[1]);
    return m;
}

}  // namespace

TEST_CASE("charging grid") {
    const auto g = charging_grid(2.0, 11, 1.5);
    CHECK(g.front() == 0.0);
    CHECK(g[10] == 2.0);
    CHECK(g.back() == Approx(3.0));
    CHECK(g.size() == 16);
    CHECK(charging_grid(2.0, 11, 1.0).size() == 11);
}

TEST_CASE("log spaced values") {
    const auto v = log_spaced(1e-4, 1e-1, 40);
    CHECK(v.size() == 40);
    CHECK(v.front() == 1e-4);
    CHECK(v.back() == 1e-1);
    int hits = 0;
    for (double x : v) hits += (std::abs(x - 1e-2) < 1e-15 || std::abs(x - 1e-3) < 1e-16);
    CHECK(hits == 2);
}

TEST_CASE("closed-system reference runs") {
    const auto sta = run_protocol(gaussian(Protocol::STA, 7.2), {});
    CHECK(sta.report.W_norm >= 0.99);
    CHECK(max_p2(sta.trajectory) <= 0.01);
    CHECK(sta.trajectory.diagnostics.max_norm_drift <= 1e-8);

    const auto stirap = run_protocol(gaussian(Protocol::STIRAP, 7.2), {});
    CHECK(stirap.report.populations[2] < 0.2);

    const auto slow = run_protocol(gaussian(Protocol::STIRAP, 50.0), {});
    CHECK(slow.report.populations[2] >= 0.99);
    // Around the crossing time the middle level stays nearly empty.
    double mid = 0.0;
    for (std::size_t i = 0; i < slow.trajectory.size(); ++i) {
        if (std::abs(slow.trajectory.times[i] - 26.0) < 3.0) mid = std::max(mid, slow.trajectory.populations[i][1]);
    }
    CHECK(mid < 0.05);

    const auto fast_sta = run_protocol(gaussian(Protocol::STA, 0.1), {});
    const auto fast_stirap = run_protocol(gaussian(Protocol::STIRAP, 0.1), {});
    CHECK(fast_sta.report.W_norm >= 0.9);
    CHECK(fast_stirap.report.W_charged <= 1e-6);
    CHECK(fast_sta.report.W_charged / fast_stirap.report.W_charged >= 1e6);
}

TEST_CASE("rotated protocol is reported in the original frame") {
    const auto lab = run_protocol(gaussian(Protocol::STA, 7.2), {});
    const auto rot = run_protocol(gaussian(Protocol::STA_Rotated, 7.2), {});
    for (int k = 0; k < 3; ++k) CHECK(rot.report.populations[k] == Approx(lab.report.populations[k]).epsilon(1e-6));
}

TEST_CASE("run errors carry context") {
    const ProtocolSpec bad{Protocol::STA_Rotated, PulseSpec::ramp(1.0, 7.2)};
    try {
        run_protocol(bad, {});
        FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("STA_Rotated") != std::string::npos);
    }
}

TEST_CASE("charge is stable after the charging window") {
    for (auto p : {Protocol::STA, Protocol::STIRAP}) {
        const double wt = p == Protocol::STA ? 7.2 : 50.0;
        const auto run = run_protocol(gaussian(p, wt), {}, {.samples = 400, .horizon = 1.5});
        const auto& tr = run.trajectory;
        for (std::size_t i = run.charge_index; i < tr.size(); ++i) {
            const double w = 0.3809 * tr.populations[i][1] + tr.populations[i][2];
            CHECK(std::abs(w - run.report.W_norm) <= 1e-3);
        }
    }
}

TEST_CASE("sweep validation") {
    auto spec = tau_sweep({1.0, 0.5});
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.values = {};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.values = {1.0};
    spec.samples_per_run = 10;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("tau sweep rows") {
    const auto res = sweep_tau(tau_sweep({0.1, 1.0, 7.2, 20.0, 50.0}));
    REQUIRE(res.rows.size() == 5);
    for (const auto& row : res.rows) {
        REQUIRE(row.ok());
        CHECK_FALSE(row.flagged);
        CHECK(row.sta->report.W_norm >= 0.99);
        CHECK((row.stirap->report.W_norm >= 0.99) == (row.value >= 25.0));
    }
    CHECK(std::abs(res.rows[4].sta->report.W_charged - res.rows[4].stirap->report.W_charged) <= 0.01);
}

TEST_CASE("sta average power decreases with charging time") {
    const auto res = sweep_tau(tau_sweep(log_spaced(0.1, 50.0, 40)));
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        CHECK(res.rows[i].sta->report.P_avg < res.rows[i - 1].sta->report.P_avg);
    }
}

TEST_CASE("failing rows are recorded and the sweep continues") {
    auto spec = tau_sweep({7.2, 5000.0});
    spec.integrator.max_steps = 3000;
    const auto res = sweep_tau(spec);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].ok());
    CHECK_FALSE(res.rows[1].ok());
    CHECK(res.rows[1].error.find("step") != std::string::npos);
    CHECK_THROWS_AS(sweep_tau(tau_sweep({0.0, 7.2})), ValidationError);
}

TEST_CASE("parallel and serial sweeps are bit-identical") {
    for (auto family : {PulseFamily::Gaussian, PulseFamily::Sinusoid, PulseFamily::Ramp}) {
        const auto spec = tau_sweep(log_spaced(0.1, 50.0, 12), family);
        CHECK(identical(sweep_tau(spec, Execution::Serial), sweep_tau(spec, Execution::Parallel)));
    }
    auto gspec = tau_sweep(log_spaced(1e-4, 1e-1, 6));
    gspec.variable = SweepVariable::GammaZ;
    CHECK(identical(sweep_gamma(gspec, DecoherenceChannel::Dephasing, Execution::Serial),
                    sweep_gamma(gspec, DecoherenceChannel::Dephasing, Execution::Parallel)));
}

TEST_CASE("repeated runs are deterministic") {
    const auto a = run_protocol(gaussian(Protocol::STIRAP, 10.0), {0.01, 0.002});
    const auto b = run_protocol(gaussian(Protocol::STIRAP, 10.0), {0.01, 0.002});
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        for (int k = 0; k < 3; ++k) CHECK(same_bits(a.trajectory.populations[i][k], b.trajectory.populations[i][k]));
    }
}

TEST_CASE("gamma sweep forces the other channel off") {
    auto spec = tau_sweep({0.001, 0.01});
    spec.variable = SweepVariable::GammaMinus;
    spec.base_decoherence = {0.5, 0.5};
    const auto res = sweep_gamma(spec, DecoherenceChannel::Dissipation);
    REQUIRE(res.rows.size() == 2);
    REQUIRE(res.rows[0].ok());
    CHECK(res.rows[0].sta->open);
    CHECK(std::abs(res.rows[0].sta->report.populations[2] - 0.996) <= 0.005);
    CHECK(std::abs(res.rows[0].stirap->report.populations[2] - 0.975) <= 0.005);
    CHECK(res.rows[1].stirap->report.W_norm < res.rows[0].stirap->report.W_norm);
}

TEST_CASE("invariant flags") {
    Diagnostics d;
    CHECK(within_propagator_invariants(d, false));
    d.max_norm_drift = 1e-6;
    CHECK_FALSE(within_propagator_invariants(d, false));
    Diagnostics o;
    o.min_eigenvalue = -1e-5;
    CHECK_FALSE(within_propagator_invariants(o, true));
}

TEST_CASE("frame equivalence") {
    const auto r = verify_frame_equivalence(PulseSpec::gaussian(1.0, 7.2), 401);
    CHECK(r.max_deviation <= 1e-5);
    CHECK(r.final_populations_mapped[2] >= 0.99);
    CHECK(r.final_phi == Approx(std::atan2(eval_cd_analytic(PulseSpec::gaussian(1.0, 7.2), 7.2),
                                           eval_pair(PulseSpec::gaussian(1.0, 7.2), 7.2).omega1)));
}

TEST_CASE("pulse table") {
    const auto rows = tabulate_pulses(PulseSpec::ramp(1.0, 2.0), TimeGrid::uniform(0.0, 2.0, 5));
    REQUIRE(rows.size() == 5);
    CHECK(std::isnan(rows[0].phi));
    CHECK(rows[2].omega1 == Approx(1.0));
    CHECK(rows[2].omega_a == Approx(std::numbers::pi / 2.0));
    CHECK(std::isfinite(rows[3].omega1_tilde));
}
