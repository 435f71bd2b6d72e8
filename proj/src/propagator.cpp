#include "stacharge/propagator.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dormand_prince.hpp"
#include "stacharge/errors.hpp"

namespace stacharge {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw ValidationError("time grid needs at least two points");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i])) throw ValidationError("time grid contains a non-finite time");
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            std::ostringstream os;
            os << "time grid must be strictly increasing (index " << i << ")";
            throw ValidationError(os.str());
        }
    }
}

TimeGrid TimeGrid::uniform(double t0, double t1, std::size_t n) {
    if (n < 2) throw ValidationError("uniform grid needs n >= 2");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    t.back() = t1;
    return TimeGrid(std::move(t));
}

PureState PureState::from(const Vec3& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "pure state must have unit norm (got " << n << ")";
        throw ValidationError(os.str());
    }
    return PureState(v);
}

DensityMatrix DensityMatrix::from(const Mat3& m) {
    if (!m.allFinite()) throw ValidationError("density matrix has non-finite entries");
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (deviation " << herm << ")";
        throw ValidationError(os.str());
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "density matrix must have unit trace (got " << tr << ")";
        throw ValidationError(os.str());
    }
    const Mat3 sym = 0.5 * (m + m.adjoint());
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat3>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (lmin < -1e-8) {
        std::ostringstream os;
        os << "density matrix is not positive semidefinite (eigenvalue " << lmin << ")";
        throw ValidationError(os.str());
    }
    return DensityMatrix(sym);
}

void DecoherenceSpec::validate() const {
    if (!std::isfinite(gamma_minus) || gamma_minus < 0.0) {
        std::ostringstream os;
        os << "field 'gamma_minus' must be >= 0 (got " << gamma_minus << ")";
        throw ValidationError(os.str());
    }
    if (!std::isfinite(gamma_z) || gamma_z < 0.0) {
        std::ostringstream os;
        os << "field 'gamma_z' must be >= 0 (got " << gamma_z << ")";
        throw ValidationError(os.str());
    }
}

void IntegratorOptions::validate() const {
    if (method == IntegratorMethod::DormandPrince45 && !(rtol >= 1e-12 && rtol <= 1e-6)) {
        std::ostringstream os;
        os << "field 'rtol' must lie in [1e-12, 1e-6] (got " << rtol << ")";
        throw ValidationError(os.str());
    }
    if (!(atol > 0.0) || !std::isfinite(atol)) throw ValidationError("field 'atol' must be > 0");
    if (rk4_substeps < 1) throw ValidationError("field 'rk4_substeps' must be >= 1");
    if (!(trace_abort > 0.0)) throw ValidationError("field 'trace_abort' must be > 0");
}

Mat3 Trajectory::density(std::size_t i) const {
    if (is_open()) return density_matrices[i];
    return projector(pure_states[i]);
}

namespace {

std::array<double, 3> diagonal(const Vec3& psi) {
    return {std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2))};
}

std::array<double, 3> diagonal(const Mat3& rho) {
    return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
}

template <class Run>
Trajectory run_integrator(const IntegratorOptions& options, Run&& run) {
    options.validate();
    Trajectory traj;
    run(traj);
    return traj;
}

// Jump operators and their A^+ A products, with the 1/2 rate prefactor folded in.
struct Channel {
    double half_rate;
    Mat3 a;
    Mat3 ada;
};

std::vector<Channel> channels(const DecoherenceSpec& dec) {
    std::vector<Channel> out;
    for (int k = 2; k <= 3; ++k) {
        const Vec3 upper = basis_state(k);
        const Vec3 lower = basis_state(k - 1);
        if (dec.gamma_minus > 0.0) {
            const Mat3 a = lower * upper.adjoint();
            out.push_back({0.5 * dec.gamma_minus, a, a.adjoint() * a});
        }
        if (dec.gamma_z > 0.0) {
            const Mat3 a = projector(upper) - projector(lower);
            out.push_back({0.5 * dec.gamma_z, a, a.adjoint() * a});
        }
    }
    return out;
}

Mat3 lindblad_rhs_with(const Mat3& rho, const Mat3& h, const std::vector<Channel>& chans) {
    Mat3 d = -kI * (h * rho - rho * h);
    for (const auto& c : chans) {
        d += c.half_rate * (2.0 * c.a * rho * c.a.adjoint() - c.ada * rho - rho * c.ada);
    }
    return d;
}

}  // namespace

Trajectory propagate_pure(const HamiltonianFn& h, const PureState& psi0, const TimeGrid& grid,
                          const IntegratorOptions& options) {
    return run_integrator(options, [&](Trajectory& traj) {
        const std::size_t n = grid.size();
        traj.times.assign(grid.times().begin(), grid.times().end());
        traj.pure_states.resize(n);
        traj.populations.resize(n);

        const auto rhs = [&h](double t, const Vec3& psi) -> Vec3 { return -kI * (h(t) * psi); };
        const auto after = [](Vec3&, double) {};
        const auto sample = [&traj](std::size_t i, const Vec3& psi) {
            traj.pure_states[i] = psi;
            traj.populations[i] = diagonal(psi);
            traj.diagnostics.max_norm_drift =
                std::max(traj.diagnostics.max_norm_drift, std::abs(psi.norm() - 1.0));
        };

        if (options.method == IntegratorMethod::FixedRK4) {
            detail::integrate_rk4<Vec3>(rhs, psi0.vector(), grid.times(), options, traj.diagnostics, after, sample);
        } else {
            detail::integrate_dopri<Vec3>(rhs, psi0.vector(), grid.times(), options, traj.diagnostics, after,
                                          sample);
        }
    });
}

Mat3 lindblad_rhs(const Mat3& rho, const Mat3& h, const DecoherenceSpec& dec) {
    return lindblad_rhs_with(rho, h, channels(dec));
}

Trajectory propagate_lindblad(const HamiltonianFn& h, const DensityMatrix& rho0, const DecoherenceSpec& dec,
                              const TimeGrid& grid, const IntegratorOptions& options) {
    dec.validate();
    return run_integrator(options, [&](Trajectory& traj) {
        const std::size_t n = grid.size();
        traj.times.assign(grid.times().begin(), grid.times().end());
        traj.density_matrices.resize(n);
        traj.populations.resize(n);

        const auto chans = channels(dec);
        const auto rhs = [&h, &chans](double t, const Mat3& rho) -> Mat3 {
            return lindblad_rhs_with(rho, h(t), chans);
        };
        const auto after = [&options, &traj](Mat3& rho, double t) {
            traj.diagnostics.max_hermiticity_error = std::max(
                traj.diagnostics.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
            rho = 0.5 * (rho + rho.adjoint()).eval();
            const double drift = std::abs(rho.trace().real() - 1.0);
            if (drift > options.trace_abort) {
                std::ostringstream os;
                os << "trace drift " << drift << " exceeds " << options.trace_abort << " at t = " << t;
                throw NumericalError(NumericalError::Kind::TraceDrift, os.str());
            }
        };
        const auto sample = [&traj](std::size_t i, const Mat3& raw) {
            const Mat3 rho = 0.5 * (raw + raw.adjoint());
            traj.density_matrices[i] = rho;
            traj.populations[i] = diagonal(rho);
            auto& d = traj.diagnostics;
            d.max_trace_drift = std::max(d.max_trace_drift, std::abs(rho.trace().real() - 1.0));
            const double lmin =
                Eigen::SelfAdjointEigenSolver<Mat3>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
            d.min_eigenvalue = std::min(d.min_eigenvalue, lmin);
        };

        if (options.method == IntegratorMethod::FixedRK4) {
            detail::integrate_rk4<Mat3>(rhs, rho0.matrix(), grid.times(), options, traj.diagnostics, after, sample);
        } else {
            detail::integrate_dopri<Mat3>(rhs, rho0.matrix(), grid.times(), options, traj.diagnostics, after,
                                          sample);
        }
    });
}

}  // namespace stacharge
