#include "stacharge/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "stacharge/errors.hpp"

namespace stacharge {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double value, const char* field) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "pulse field '" << field << "' must be finite (got " << value << ")";
        throw ValidationError(os.str());
    }
}

void require_positive(double value, const char* field) {
    require_finite(value, field);
    if (value <= 0.0) {
        std::ostringstream os;
        os << "pulse field '" << field << "' must be > 0 (got " << value << ")";
        throw ValidationError(os.str());
    }
}

// sin^4 lobe: sin^4(x) for x in [0, pi], zero elsewhere.
double lobe(double x) {
    if (x < 0.0 || x > kPi) return 0.0;
    const double s = std::sin(x);
    return s * s * s * s;
}

double lobe_derivative(double x) {
    if (x < 0.0 || x > kPi) return 0.0;
    const double s = std::sin(x);
    return 4.0 * s * s * s * std::cos(x);
}

bool lobe_open(double x) { return x > 0.0 && x < kPi; }

double gaussian_cd_argument(const PulseSpec& spec, double t) {
    const double s2 = spec.sigma() * spec.sigma();
    return 4.0 * spec.alpha() * (t - 0.5 * spec.tau_c()) / s2;
}

double gaussian_phi_dot(const PulseSpec& spec, double t) {
    const double s2 = spec.sigma() * spec.sigma();
    const double x = gaussian_cd_argument(spec, t);
    const double sech = 1.0 / std::cosh(x);
    const double amp = 2.0 * spec.alpha() / s2;
    const double oa = amp * sech;
    const double doa = -amp * (4.0 * spec.alpha() / s2) * sech * std::tanh(x);
    const double o1 = eval_pair(spec, t).omega1;
    const double do1 = eval_pair_derivative(spec, t).omega1;
    return (doa * o1 - oa * do1) / (o1 * o1 + oa * oa);
}

}  // namespace

std::string_view to_string(PulseFamily family) {
    switch (family) {
        case PulseFamily::Gaussian: return "Gaussian";
        case PulseFamily::Sinusoid: return "Sinusoid";
        case PulseFamily::Ramp: return "Ramp";
    }
    return "?";
}

std::optional<PulseFamily> parse_pulse_family(std::string_view name) {
    if (name == "Gaussian" || name == "gaussian") return PulseFamily::Gaussian;
    if (name == "Sinusoid" || name == "sinusoid") return PulseFamily::Sinusoid;
    if (name == "Ramp" || name == "ramp") return PulseFamily::Ramp;
    return std::nullopt;
}

PulseSpec::PulseSpec(PulseFamily family, double omega0, double tau_c, PulseShape shape)
    : family_(family), omega0_(omega0), tau_c_(tau_c), overrides_(shape) {
    require_positive(omega0, "omega0");
    require_positive(tau_c, "tau_c");
    alpha_ = shape.alpha.value_or(tau_c / 10.0);
    sigma_ = shape.sigma.value_or(tau_c / 6.0);
    beta_ = shape.beta.value_or(tau_c / 10.0);
    require_finite(alpha_, "alpha");
    require_positive(sigma_, "sigma");
    require_finite(beta_, "beta");
}

PulseSpec PulseSpec::with_tau_c(double tau_c) const { return PulseSpec(family_, omega0_, tau_c, overrides_); }

PulsePair eval_pair(const PulseSpec& spec, double t) {
    const double w = spec.omega0();
    const double tc = spec.tau_c();
    switch (spec.family()) {
        case PulseFamily::Gaussian: {
            const double s2 = spec.sigma() * spec.sigma();
            const double d1 = t - 0.5 * tc - spec.alpha();
            const double d2 = t - 0.5 * tc + spec.alpha();
            return {w * std::exp(-d1 * d1 / s2), w * std::exp(-d2 * d2 / s2)};
        }
        case PulseFamily::Sinusoid:
            return {w * lobe(kPi * (t - spec.beta()) / tc), w * lobe(kPi * (t + spec.beta()) / tc)};
        case PulseFamily::Ramp: {
            const double c = std::cos(kPi * t / tc);
            return {w * (1.0 - c), w * c};
        }
    }
    return {0.0, 0.0};
}

PulsePair eval_pair_derivative(const PulseSpec& spec, double t) {
    const double w = spec.omega0();
    const double tc = spec.tau_c();
    switch (spec.family()) {
        case PulseFamily::Gaussian: {
            const double s2 = spec.sigma() * spec.sigma();
            const double d1 = t - 0.5 * tc - spec.alpha();
            const double d2 = t - 0.5 * tc + spec.alpha();
            const auto [o1, o2] = eval_pair(spec, t);
            return {-2.0 * d1 / s2 * o1, -2.0 * d2 / s2 * o2};
        }
        case PulseFamily::Sinusoid: {
            const double k = kPi / tc;
            return {w * k * lobe_derivative(k * (t - spec.beta())), w * k * lobe_derivative(k * (t + spec.beta()))};
        }
        case PulseFamily::Ramp: {
            const double k = kPi / tc;
            const double s = std::sin(k * t);
            return {w * k * s, -w * k * s};
        }
    }
    return {0.0, 0.0};
}

PulseSample eval_sample(const PulseSpec& spec, double t) {
    const auto [o1, o2] = eval_pair(spec, t);
    return {o1, o2, eval_cd_analytic(spec, t)};
}

double mixing_angle(double omega1, double omega2) {
    if (omega1 == 0.0 && omega2 == 0.0) {
        throw NumericalError(NumericalError::Kind::DegenerateAngle, "mixing angle undefined: both pulses vanish");
    }
    double theta = std::atan2(omega1, omega2);
    if (theta < 0.0) theta += kPi;
    if (theta >= kPi) theta -= kPi;
    return theta;
}

double eval_cd_from_derivatives(double omega1, double omega2, double domega1, double domega2) {
    const double norm2 = omega1 * omega1 + omega2 * omega2;
    if (norm2 == 0.0) {
        throw NumericalError(NumericalError::Kind::DegeneratePulse,
                             "counter-diabatic pulse undefined: Omega_1^2 + Omega_2^2 = 0");
    }
    return (domega1 * omega2 - omega1 * domega2) / norm2;
}

double eval_cd_analytic(const PulseSpec& spec, double t) {
    const double tc = spec.tau_c();
    switch (spec.family()) {
        case PulseFamily::Gaussian: {
            const double s2 = spec.sigma() * spec.sigma();
            return 2.0 * spec.alpha() / s2 / std::cosh(gaussian_cd_argument(spec, t));
        }
        case PulseFamily::Sinusoid: {
            // theta is piecewise constant wherever at most one lobe is active.
            const double x1 = kPi * (t - spec.beta()) / tc;
            const double x2 = kPi * (t + spec.beta()) / tc;
            if (!lobe_open(x1) || !lobe_open(x2)) return 0.0;
            const double s1 = std::sin(x1);
            const double s2 = std::sin(x2);
            const double s1_3 = s1 * s1 * s1;
            const double s2_3 = s2 * s2 * s2;
            const double num = 4.0 * kPi / tc * std::sin(2.0 * kPi * spec.beta() / tc) * s1_3 * s2_3;
            return num / (s1_3 * s1_3 * s1 * s1 + s2_3 * s2_3 * s2 * s2);
        }
        case PulseFamily::Ramp: {
            const double u = kPi * t / tc;
            const double c = std::cos(u);
            return (kPi / tc) * std::sin(u) / (2.0 * c * c - 2.0 * c + 1.0);
        }
    }
    return 0.0;
}

double max_cd_amplitude(const PulseSpec& spec) {
    if (spec.family() == PulseFamily::Gaussian) {
        return std::abs(2.0 * spec.alpha() / (spec.sigma() * spec.sigma()));
    }

    const double tc = spec.tau_c();
    const auto f = [&](double t) { return std::abs(eval_cd_analytic(spec, t)); };

    constexpr int kGrid = 4096;
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i <= kGrid; ++i) {
        const double v = f(tc * i / kGrid);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    // Golden-section refinement on the bracketing cells.
    double a = tc * std::max(best - 1, 0) / kGrid;
    double b = tc * std::min(best + 1, kGrid) / kGrid;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-13 * tc) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::max({best_val, fc, fd});
}

double rotation_angle(const PulseSpec& spec, double t) {
    const double o1 = eval_pair(spec, t).omega1;
    const double oa = eval_cd_analytic(spec, t);
    if (o1 == 0.0 && oa == 0.0) {
        std::ostringstream os;
        os << "frame rotation angle undefined at t = " << t << ": Omega_1 and Omega_a both vanish";
        throw NumericalError(NumericalError::Kind::DegenerateAngle, os.str());
    }
    return std::atan2(oa, o1);
}

ModifiedPulses modified_pulses(const PulseSpec& spec, double t) {
    const auto [o1, o2] = eval_pair(spec, t);
    const double oa = eval_cd_analytic(spec, t);
    const double phi = rotation_angle(spec, t);

    double phi_dot = 0.0;
    if (spec.family() == PulseFamily::Gaussian) {
        phi_dot = gaussian_phi_dot(spec, t);
    } else {
        const double h = 1e-6 * spec.tau_c();
        phi_dot = (rotation_angle(spec, t + h) - rotation_angle(spec, t - h)) / (2.0 * h);
    }
    return {std::hypot(o1, oa), o2 - phi_dot, phi};
}

}  // namespace stacharge
