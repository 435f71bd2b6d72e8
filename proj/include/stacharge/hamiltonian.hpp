#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>

#include "stacharge/pulses.hpp"
#include "stacharge/types.hpp"

namespace stacharge {

enum class Protocol { STIRAP, STA, STA_Rotated };

std::string_view to_string(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view name);

inline constexpr double kDefaultLevelRatio = 0.3809;

/// Which Hamiltonian drives the battery, plus its detuning and level structure.
struct ProtocolSpec {
    Protocol protocol;
    PulseSpec pulse;
    double detuning = 0.0;
    /// omega_2 / omega_3 with omega_1 = 0; energies are in units of omega_3 = W_max.
    double level_ratio = kDefaultLevelRatio;

    /// Throws ValidationError on a non-finite detuning or a level ratio outside (0, 1).
    void validate() const;
};

/// Eigenvectors of the resonant two-pulse Hamiltonian: dark state with eigenvalue 0 and the
/// bright pair with eigenvalues +Omega and -Omega.
struct Eigenstructure {
    Vec3 dark;
    Vec3 bright_plus;
    Vec3 bright_minus;
    std::array<double, 3> eigenvalues;  // (0, +Omega, -Omega)
};

using HamiltonianFn = std::function<Mat3(double)>;

/// [[0, O1, 0], [O1, delta, O2], [0, O2, 0]]
Mat3 build_stirap(double omega1, double omega2, double delta);

/// STIRAP matrix with the counter-diabatic block: +i Oa at (1,3), -i Oa at (3,1).
Mat3 build_sta(double omega1, double omega2, double omega_a, double delta);

/// O1~ S1 + O2~ S3; the (1,3) element is identically zero.
Mat3 build_rotated_sta(double omega1_tilde, double omega2_tilde);

/// U = exp(-i phi S3).
Mat3 rotation_frame_U(double phi);

/// SU(2) generators of the ladder system.
Mat3 generator_s1();
Mat3 generator_s2();
Mat3 generator_s3();

/// Throws NumericalError(DegenerateAngle) when both pulses vanish.
Eigenstructure eigenstructure(double omega1, double omega2);

/// diag(0, r, 1). Throws ValidationError unless 0 < r < 1.
Eigen::Matrix3d bare_h0(double level_ratio);

/// Time-dependent Hamiltonian for the protocol. For STA_Rotated this is the Hamiltonian in
/// the rotated frame; map states back with rotation_frame_U(rotation_angle(pulse, t)).
HamiltonianFn make_hamiltonian(const ProtocolSpec& spec);

}  // namespace stacharge
