#pragma once

#include <Eigen/Dense>
#include <vector>

#include "anelastic/spectral.hpp"
#include "anelastic/weighted.hpp"

namespace anelastic {

/// Discrete weighted Poisson operator p |-> div P_m(rho grad p) acting on the
/// even, mean-free pressure band. Block-diagonal over the horizontal
/// wavenumber k1; the k1=0 block is gauge-fixed by dropping the constant mode.
class PressureSystem {
  public:
    PressureSystem(const Eigen::VectorXd& rho_samples, int m, const PhysicalGrid& grid);

    int band() const { return m_; }

    /// Apply the operator to an even field (mean component passes through as
    /// zero: the operator's range is mean-free).
    SpectralField apply(const SpectralField& p) const;

    /// Solve L p = rhs for the mean-free pressure. rhs must be even and
    /// mean-free: |rhs(0,0)| <= tol_compat * ||rhs||_L2 is enforced.
    SpectralField solve(const SpectralField& rhs) const;

    /// Residual ||L p - rhs||_L2 of the last solve, and its ratio to ||rhs||.
    double last_residual() const { return last_residual_; }
    double last_relative_residual() const { return last_rel_residual_; }

    /// Smallest reciprocal condition estimate over the k1 blocks (1-norm).
    double rcond() const;

    /// Real block for horizontal wavenumber k1 (vertical index 0..m);
    /// symmetric negative (semi-)definite after scaling out the per-mode
    /// normalization diag(1,2,...,2). The k1=0 block is singular in its
    /// (0,0) gauge direction.
    const Eigen::MatrixXd& block(int k1) const { return blocks_[k1]; }

    /// Dense real materialization of the operator on the mean-free real
    /// coefficient vector. Ordering: k2 = 0..m outer, k1 = 0..m inner, one
    /// slot (Re) for k1=0 and two slots (Re, Im) for k1>0, with the (0,0)
    /// mode omitted. Dimension (2m+1)(m+1)-1.
    Eigen::MatrixXd dense_matrix() const;

    static constexpr double kCompatTol = 1e-10;

  private:
    int m_;
    std::vector<Eigen::MatrixXd> blocks_;               // k1 = 0..m
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lus_;  // k1=0: (m x m) trailing block
    mutable double last_residual_ = 0.0, last_rel_residual_ = 0.0;
};

/// Right-hand side of the pressure equation given the velocity components and
/// the convective term N = P_m[rho (u . grad) u]:
///   rhs = dx(lap v) + dz(lap w) - dx(N_v) - dz(N_w).
SpectralField pressure_rhs(const SpectralField& v, const SpectralField& w,
                           const SpectralField& nv, const SpectralField& nw);

}  // namespace anelastic
