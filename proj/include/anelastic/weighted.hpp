#pragma once

#include <Eigen/Dense>

#include "anelastic/density.hpp"
#include "anelastic/spectral.hpp"

namespace anelastic {

/// Coefficient-space matrix of f |-> P_m(rho f) acting on the vertical
/// expansion of one parity class, with rho given by its samples at the grid's
/// z nodes. Entry (k,l) maps input mode l to output mode k, k,l = 0..m.
/// For Odd parity row 0 and column 0 are identically zero (no k2=0 sine mode).
/// The matrix is built by exact quadrature on the supplied grid, so it is the
/// transpose-similar image of a symmetric positive semi-definite Gram matrix
/// whenever rho >= 0 at the nodes.
Eigen::MatrixXd zmult_matrix(const Eigen::VectorXd& rho_samples, Parity parity, int m,
                             const PhysicalGrid& grid);

/// Symmetric Gram form G(k,l) = sum_j wz_j rho_j phi_k(z_j) phi_l(z_j) of the
/// same operator (zmult = diag(norm) * G). Used for definiteness checks.
Eigen::MatrixXd zmult_gram(const Eigen::VectorXd& rho_samples, Parity parity, int m,
                           const PhysicalGrid& grid);

/// Mass operator u |-> P_m(rho u) per parity, with factorizations for the
/// inverse. Acts identically on every horizontal wavenumber column.
class MassMatrix {
  public:
    MassMatrix(const Eigen::VectorXd& rho_samples, int m, const PhysicalGrid& grid);

    int band() const { return m_; }
    /// Coefficient map for the given parity (Odd: zero row/col 0).
    const Eigen::MatrixXd& matrix(Parity p) const { return p == Parity::Even ? me_ : mo_raw_; }
    /// Symmetric Gram form for the given parity.
    const Eigen::MatrixXd& gram(Parity p) const { return p == Parity::Even ? ge_ : go_; }

    SpectralField apply(const SpectralField& f) const;
    /// Solve M x = f (one step of iterative refinement). For Odd parity the
    /// k2=0 row of f must be zero and stays zero in x.
    SpectralField solve(const SpectralField& f) const;

    /// Smallest eigenvalue of the symmetric Gram form (restricted to the
    /// active modes for Odd parity). Positive iff the operator is positive
    /// definite on its parity class.
    double min_gram_eigenvalue(Parity p) const;
    /// max_{k,l} |M - I| over both parities (Odd restricted to active block).
    double max_identity_deviation() const;

  private:
    int m_;
    Eigen::MatrixXd me_, mo_raw_, mo_shim_;  // shim: unit k2=0 diagonal for solves
    Eigen::MatrixXd ge_, go_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lue_, luo_;
};

}  // namespace anelastic
