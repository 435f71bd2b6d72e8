#pragma once

#include <complex>

#include <Eigen/Dense>

namespace stacharge {

using Complex = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

inline constexpr Complex kI{0.0, 1.0};

/// Basis state |e_k> for k = 1, 2, 3 (level labels follow the physics convention).
inline Vec3 basis_state(int level) {
    Vec3 v = Vec3::Zero();
    v(level - 1) = 1.0;
    return v;
}

inline Mat3 projector(const Vec3& v) { return v * v.adjoint(); }

}  // namespace stacharge
