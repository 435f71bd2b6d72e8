#include "stacharge/hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "stacharge/errors.hpp"

namespace stacharge {

std::string_view to_string(Protocol protocol) {
    switch (protocol) {
        case Protocol::STIRAP: return "STIRAP";
        case Protocol::STA: return "STA";
        case Protocol::STA_Rotated: return "STA_Rotated";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
    if (name == "STIRAP" || name == "stirap") return Protocol::STIRAP;
    if (name == "STA" || name == "sta") return Protocol::STA;
    if (name == "STA_Rotated" || name == "sta_rotated" || name == "STA-rotated") return Protocol::STA_Rotated;
    return std::nullopt;
}

void ProtocolSpec::validate() const {
    if (!std::isfinite(detuning)) throw ValidationError("field 'detuning' must be finite");
    if (!(level_ratio > 0.0 && level_ratio < 1.0)) {
        std::ostringstream os;
        os << "field 'level_ratio' must lie in (0, 1) (got " << level_ratio << ")";
        throw ValidationError(os.str());
    }
    if (protocol == Protocol::STA_Rotated && detuning != 0.0) {
        throw ValidationError("field 'detuning' must be 0 for protocol STA_Rotated");
    }
}

Mat3 build_stirap(double omega1, double omega2, double delta) {
    Mat3 h = Mat3::Zero();
    h(0, 1) = h(1, 0) = omega1;
    h(1, 2) = h(2, 1) = omega2;
    h(1, 1) = delta;
    return h;
}

Mat3 build_sta(double omega1, double omega2, double omega_a, double delta) {
    Mat3 h = build_stirap(omega1, omega2, delta);
    h(0, 2) = kI * omega_a;
    h(2, 0) = -kI * omega_a;
    return h;
}

Mat3 build_rotated_sta(double omega1_tilde, double omega2_tilde) {
    return omega1_tilde * generator_s1() + omega2_tilde * generator_s3();
}

Mat3 generator_s1() {
    Mat3 s = Mat3::Zero();
    s(0, 1) = s(1, 0) = 1.0;
    return s;
}

Mat3 generator_s2() {
    Mat3 s = Mat3::Zero();
    s(0, 2) = -kI;
    s(2, 0) = kI;
    return s;
}

Mat3 generator_s3() {
    Mat3 s = Mat3::Zero();
    s(1, 2) = s(2, 1) = 1.0;
    return s;
}

Mat3 rotation_frame_U(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Mat3 u = Mat3::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = u(2, 2) = c;
    u(1, 2) = u(2, 1) = -kI * s;
    return u;
}

Eigenstructure eigenstructure(double omega1, double omega2) {
    const double theta = mixing_angle(omega1, omega2);
    const double omega = std::hypot(omega1, omega2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // On the [0, pi) branch (sin, cos) equals (omega1, omega2)/omega only up to an overall sign.
    const double b1 = omega1 / omega;
    const double b2 = omega2 / omega;

    Eigenstructure e;
    e.dark << c, 0.0, -s;
    e.bright_plus << b1 * inv_sqrt2, inv_sqrt2, b2 * inv_sqrt2;
    e.bright_minus << b1 * inv_sqrt2, -inv_sqrt2, b2 * inv_sqrt2;
    e.eigenvalues = {0.0, omega, -omega};
    return e;
}

Eigen::Matrix3d bare_h0(double level_ratio) {
    if (!(level_ratio > 0.0 && level_ratio < 1.0)) {
        std::ostringstream os;
        os << "level ratio must lie in (0, 1) (got " << level_ratio << ")";
        throw ValidationError(os.str());
    }
    return Eigen::Vector3d(0.0, level_ratio, 1.0).asDiagonal();
}

HamiltonianFn make_hamiltonian(const ProtocolSpec& spec) {
    spec.validate();
    const PulseSpec pulse = spec.pulse;
    const double delta = spec.detuning;
    switch (spec.protocol) {
        case Protocol::STIRAP:
            return [pulse, delta](double t) {
                const auto [o1, o2] = eval_pair(pulse, t);
                return build_stirap(o1, o2, delta);
            };
        case Protocol::STA:
            return [pulse, delta](double t) {
                const auto s = eval_sample(pulse, t);
                return build_sta(s.omega1, s.omega2, s.omega_a, delta);
            };
        case Protocol::STA_Rotated:
            return [pulse](double t) {
                const auto m = modified_pulses(pulse, t);
                return build_rotated_sta(m.omega1_tilde, m.omega2_tilde);
            };
    }
    throw ValidationError("unknown protocol");
}

}  // namespace stacharge
