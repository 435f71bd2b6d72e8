#include <cmath>
#include <complex>

#include "doctest.h"
#include "stacharge/cd_numeric.hpp"
#include "stacharge/errors.hpp"
#include "stacharge/experiments.hpp"

using namespace stacharge;
using doctest::Approx;

namespace {

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

HamiltonianFn stirap_of(const PulseSpec& spec) { return make_hamiltonian({Protocol::STIRAP, spec}); }

}  // namespace

TEST_CASE("gauge fixed basis") {
    const auto b = gauge_fixed_eigenbasis(build_stirap(0.4, 0.9, 0.0));
    CHECK(b.eigenvalues[0] < b.eigenvalues[1]);
    CHECK(b.eigenvalues[1] < b.eigenvalues[2]);
    for (int j = 0; j < 3; ++j) {
        int imax = 0;
        b.eigenvectors[j].cwiseAbs().maxCoeff(&imax);
        CHECK(b.eigenvectors[j](imax).imag() == 0.0);
        CHECK(b.eigenvectors[j](imax).real() > 0.0);
        for (int l = 0; l < 3; ++l) {
            CHECK(std::abs(b.eigenvectors[j].dot(b.eigenvectors[l]) - (j == l ? 1.0 : 0.0)) <= 1e-12);
        }
    }
}

TEST_CASE("gauge align") {
    const auto ref = gauge_fixed_eigenbasis(build_sta(0.4, 0.9, 0.3, 0.0));
    const auto same = gauge_align(ref, ref);
    for (int j = 0; j < 3; ++j) CHECK((same.eigenvectors[j] - ref.eigenvectors[j]).norm() <= 1e-15);

    auto rotated = ref;
    rotated.eigenvectors[1] *= std::polar(1.0, std::numbers::pi / 3);
    std::swap(rotated.eigenvectors[0], rotated.eigenvectors[2]);
    std::swap(rotated.eigenvalues[0], rotated.eigenvalues[2]);
    const auto fixed = gauge_align(ref, rotated);
    for (int j = 0; j < 3; ++j) CHECK((fixed.eigenvectors[j] - ref.eigenvectors[j]).norm() <= 1e-14);

    const PulseSpec g = PulseSpec::gaussian(1.0, 7.2);
    const auto h = stirap_of(g);
    for (double t : {1.0, 3.6, 5.5}) {
        const auto a = gauge_fixed_eigenbasis(h(t));
        const auto b = gauge_align(a, gauge_fixed_eigenbasis(h(t + 1e-6 * 7.2)));
        for (int j = 0; j < 3; ++j) CHECK(std::abs(a.eigenvectors[j].dot(b.eigenvectors[j])) > 0.999);
    }

    GaugeFixedBasis orthogonal = ref;
    orthogonal.eigenvectors = {Vec3(1, 1, 0) / std::sqrt(2.0), Vec3(1, -1, 0) / std::sqrt(2.0), Vec3(0, 0, 1)};
    GaugeFixedBasis other = ref;
    other.eigenvectors = {Vec3(1, 0, 1) / std::sqrt(2.0), Vec3(1, 0, -1) / std::sqrt(2.0), Vec3(0, 1, 0)};
    CHECK_THROWS_AS(gauge_align(orthogonal, other), NumericalError);
}

TEST_CASE("time-independent hamiltonian has zero cd term") {
    const HamiltonianFn h = [](double) { return build_sta(0.3, 0.8, 0.2, 0.1); };
    CHECK(max_abs(compute_hcd_numeric(h, 1.0, 1e-4)) <= 1e-8);
}

TEST_CASE("numeric cd term reproduces the analytic block") {
    const PulseSpec g = PulseSpec::gaussian(1.0, 7.2);
    const auto h = stirap_of(g);
    for (int k = 1; k < 20; ++k) {
        const double t = 7.2 * k / 20.0;
        const Mat3 cd = compute_hcd_numeric(h, t, 1e-5 * 7.2);
        CHECK(max_abs(cd - cd.adjoint()) == 0.0);
        const double oa = eval_cd_analytic(g, t);
        CAPTURE(t);
        CHECK(std::abs(cd(0, 2) - kI * oa) <= 1e-6);
        CHECK(std::abs(cd(0, 1)) <= 1e-6);
        CHECK(std::abs(cd(1, 2)) <= 1e-6);
        for (int d = 0; d < 3; ++d) CHECK(std::abs(cd(d, d)) <= 1e-6);
    }
}

TEST_CASE("degenerate spectrum is rejected") {
    const HamiltonianFn zero = [](double) { return Mat3::Zero().eval(); };
    try {
        compute_hcd_numeric(zero, 0.0, 1e-3);
        FAIL("expected a degenerate-spectrum error");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == NumericalError::Kind::DegenerateSpectrum);
    }
}

TEST_CASE("second-order convergence in dt") {
    for (auto family : {PulseFamily::Gaussian, PulseFamily::Sinusoid, PulseFamily::Ramp}) {
        const PulseSpec spec(family, 1.0, 7.2);
        const ProtocolSpec ps{Protocol::STA, spec};
        const TimeGrid grid = TimeGrid::uniform(0.0, 7.2, 41);
        double prev = 0.0;
        for (double frac : {1e-2, 5e-3, 2.5e-3}) {
            const auto r = verify_cd_consistency(ps, grid, frac * 7.2);
            CAPTURE(to_string(family));
            CAPTURE(frac);
            if (prev > 0.0) CHECK(prev / r.max_error == Approx(4.0).epsilon(0.2));
            prev = r.max_error;
        }
    }
}

TEST_CASE("consistency at the default step") {
    const ProtocolSpec ps{Protocol::STA, PulseSpec::gaussian(1.0, 7.2)};
    const auto r = verify_cd_consistency(ps, TimeGrid::uniform(0.0, 7.2, 201), 1e-5 * 7.2);
    CHECK(r.max_error <= 1e-6);
    CHECK(r.evaluated == 201);

    const HamiltonianFn still = [](double) { return build_stirap(0.6, 0.8, 0.0); };
    const HamiltonianFn none = [](double) { return Mat3::Zero().eval(); };
    CHECK(verify_cd_consistency(still, none, TimeGrid::uniform(0.0, 1.0, 11), 1e-4).max_error <= 1e-8);
}

TEST_CASE("boundary points with vanishing pulses are skipped") {
    // beta > tau_c/2 leaves a window in which neither lobe is open.
    const ProtocolSpec ps{Protocol::STA, PulseSpec(PulseFamily::Sinusoid, 1.0, 7.2, {.beta = 0.6 * 7.2})};
    const auto r = verify_cd_consistency(ps, TimeGrid::uniform(0.0, 7.2, 101), 1e-5 * 7.2);
    CHECK(r.skipped >= 2);
    CHECK(r.evaluated + r.skipped == 101);
    CHECK(r.max_error <= 1e-6);
}
