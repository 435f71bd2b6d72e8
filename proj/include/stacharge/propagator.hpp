#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "stacharge/hamiltonian.hpp"
#include "stacharge/types.hpp"

namespace stacharge {

/// Strictly increasing, finite sample times (at least two).
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    /// n >= 2 uniformly spaced points from t0 to t1 inclusive; the last point is exactly t1.
    static TimeGrid uniform(double t0, double t1, std::size_t n);

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    double front() const noexcept { return times_.front(); }
    double back() const noexcept { return times_.back(); }
    double operator[](std::size_t i) const noexcept { return times_[i]; }

private:
    std::vector<double> times_;
};

/// Unit-norm complex 3-vector.
class PureState {
public:
    /// Throws ValidationError unless | ||v|| - 1 | <= 1e-9.
    static PureState from(const Vec3& v);
    static PureState ground() { return PureState(basis_state(1)); }

    const Vec3& vector() const noexcept { return v_; }

private:
    explicit PureState(const Vec3& v) : v_(v) {}
    Vec3 v_;
};

/// Hermitian, unit-trace, positive semidefinite 3x3 matrix.
class DensityMatrix {
public:
    /// Throws ValidationError on hermiticity error > 1e-10, trace error > 1e-8 or an
    /// eigenvalue below -1e-8.
    static DensityMatrix from(const Mat3& m);
    static DensityMatrix ground() { return DensityMatrix(projector(basis_state(1))); }
    static DensityMatrix pure(const PureState& psi) { return DensityMatrix(projector(psi.vector())); }

    const Mat3& matrix() const noexcept { return m_; }

private:
    explicit DensityMatrix(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

/// State-independent rates in units of omega0. A zero rate switches its channel off.
struct DecoherenceSpec {
    double gamma_minus = 0.0;
    double gamma_z = 0.0;

    bool closed() const noexcept { return gamma_minus == 0.0 && gamma_z == 0.0; }
    /// Throws ValidationError on negative or non-finite rates.
    void validate() const;
};

enum class IntegratorMethod { DormandPrince45, FixedRK4 };

struct IntegratorOptions {
    IntegratorMethod method = IntegratorMethod::DormandPrince45;
    double rtol = 1e-9;
    double atol = 1e-12;
    /// RK4 steps per grid interval in FixedRK4 mode.
    int rk4_substeps = 64;
    /// Lindblad runs abort once |Tr rho - 1| exceeds this.
    double trace_abort = 1e-6;
    std::size_t max_steps = 20'000'000;

    /// Throws ValidationError when rtol is outside [1e-12, 1e-6] or other fields are unusable.
    void validate() const;
};

struct Diagnostics {
    double max_norm_drift = 0.0;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;
    double max_hermiticity_error = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct Trajectory {
    std::vector<double> times;
    /// Filled by closed-system propagation.
    std::vector<Vec3> pure_states;
    /// Filled by open-system propagation.
    std::vector<Mat3> density_matrices;
    std::vector<std::array<double, 3>> populations;
    Diagnostics diagnostics;

    bool is_open() const noexcept { return !density_matrices.empty(); }
    std::size_t size() const noexcept { return times.size(); }
    Mat3 density(std::size_t i) const;
};

/// Solves i dpsi/dt = H(t) psi. No renormalization is applied; norm drift is recorded in the
/// diagnostics. Throws NumericalError(Stiffness) on step-size underflow and
/// NumericalError(Divergence) on a non-finite state.
Trajectory propagate_pure(const HamiltonianFn& h, const PureState& psi0, const TimeGrid& grid,
                          const IntegratorOptions& options = {});

/// -i[H, rho] + sum_{k=2,3} { (gz/2) L[sz_kk](rho) + (g-/2) L[s-_{k-1,k}](rho) },
/// L[A](rho) = 2 A rho A^+ - A^+ A rho - rho A^+ A.
Mat3 lindblad_rhs(const Mat3& rho, const Mat3& h, const DecoherenceSpec& dec);

/// Integrates the master equation with the same adaptive scheme. Hermiticity is restored after
/// every accepted step; trace drift above options.trace_abort raises NumericalError(TraceDrift).
Trajectory propagate_lindblad(const HamiltonianFn& h, const DensityMatrix& rho0, const DecoherenceSpec& dec,
                              const TimeGrid& grid, const IntegratorOptions& options = {});

}  // namespace stacharge
