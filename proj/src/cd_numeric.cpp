#include "stacharge/cd_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "stacharge/errors.hpp"

namespace stacharge {

GaugeFixedBasis gauge_fixed_eigenbasis(const Mat3& h) {
    Eigen::SelfAdjointEigenSolver<Mat3> solver(h);
    GaugeFixedBasis basis;
    for (int j = 0; j < 3; ++j) {
        basis.eigenvalues[j] = solver.eigenvalues()(j);
        Vec3 v = solver.eigenvectors().col(j);
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        v *= std::conj(v(k)) / std::abs(v(k));
        v(k) = std::abs(v(k));
        basis.eigenvectors[j] = v;
    }
    return basis;
}

GaugeFixedBasis gauge_align(const GaugeFixedBasis& reference, const GaugeFixedBasis& candidate) {
    std::array<int, 3> perm{0, 1, 2};
    std::array<int, 3> best_perm = perm;
    double best_score = -1.0;
    do {
        double score = 0.0;
        for (int j = 0; j < 3; ++j) {
            score += std::abs(reference.eigenvectors[j].dot(candidate.eigenvectors[perm[j]]));
        }
        if (score > best_score) {
            best_score = score;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    GaugeFixedBasis aligned;
    for (int j = 0; j < 3; ++j) {
        const Vec3& v = candidate.eigenvectors[best_perm[j]];
        const Complex overlap = reference.eigenvectors[j].dot(v);  // <ref_j|v>
        const double mag = std::abs(overlap);
        if (mag < 0.5) {
            std::ostringstream os;
            os << "eigenbasis tracking lost: overlap " << mag << " for eigenvector " << j;
            throw NumericalError(NumericalError::Kind::GaugeTracking, os.str());
        }
        aligned.eigenvectors[j] = v * (std::conj(overlap) / mag);
        aligned.eigenvalues[j] = candidate.eigenvalues[best_perm[j]];
    }
    return aligned;
}

Mat3 compute_hcd_numeric(const HamiltonianFn& h, double t, double dt, const CdNumericOptions& options) {
    const GaugeFixedBasis center = gauge_fixed_eigenbasis(h(t));
    const double gap = std::min(center.eigenvalues[1] - center.eigenvalues[0],
                                center.eigenvalues[2] - center.eigenvalues[1]);
    if (gap < options.degeneracy_gap) {
        std::ostringstream os;
        os << "degenerate spectrum at t = " << t << " (gap " << gap << ")";
        throw NumericalError(NumericalError::Kind::DegenerateSpectrum, os.str());
    }

    const GaugeFixedBasis plus = gauge_align(center, gauge_fixed_eigenbasis(h(t + dt)));
    const GaugeFixedBasis minus = gauge_align(center, gauge_fixed_eigenbasis(h(t - dt)));

    Mat3 hcd = Mat3::Zero();
    for (int j = 0; j < 3; ++j) {
        const Vec3& v = center.eigenvectors[j];
        const Vec3 dv = (plus.eigenvectors[j] - minus.eigenvectors[j]) / (2.0 * dt);
        hcd += dv * v.adjoint() - v.dot(dv) * (v * v.adjoint());
    }
    hcd *= kI;
    return 0.5 * (hcd + hcd.adjoint().eval());
}

}  // namespace stacharge
