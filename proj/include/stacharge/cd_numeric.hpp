#pragma once

#include <array>

#include "stacharge/hamiltonian.hpp"
#include "stacharge/types.hpp"

namespace stacharge {

/// Eigenbasis of a Hermitian 3x3 matrix with ascending eigenvalues. Each eigenvector is
/// phase-fixed so that its largest-magnitude component is real and positive.
struct GaugeFixedBasis {
    std::array<double, 3> eigenvalues;
    std::array<Vec3, 3> eigenvectors;
};

/// Diagonalizes h and applies the phase convention above.
GaugeFixedBasis gauge_fixed_eigenbasis(const Mat3& h);

/// Reorders candidate vectors to their maximum-overlap partners in reference and rotates
/// each by a unit phase so <reference_j|candidate_j> is real and positive.
/// Throws NumericalError(GaugeTracking) if any matched overlap falls below 0.5.
GaugeFixedBasis gauge_align(const GaugeFixedBasis& reference, const GaugeFixedBasis& candidate);

struct CdNumericOptions {
    /// Spectra whose smallest gap falls below this are treated as degenerate.
    double degeneracy_gap = 1e-8;
};

/// H_CD = i sum_j (|d_t l_j><l_j| - <l_j|d_t l_j> |l_j><l_j|), with |d_t l_j> from a
/// gauge-aligned central difference over [t - dt, t + dt]. The result is symmetrized to be
/// exactly Hermitian. Throws NumericalError(DegenerateSpectrum) for a degenerate spectrum.
Mat3 compute_hcd_numeric(const HamiltonianFn& h, double t, double dt, const CdNumericOptions& options = {});

}  // namespace stacharge
