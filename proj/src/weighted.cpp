#include "anelastic/weighted.hpp"

#include <cmath>

#include "anelastic/errors.hpp"

namespace anelastic {

namespace {

// Vertical basis samples phi_k(z_j), j x k, for one parity class.
Eigen::MatrixXd z_basis(Parity parity, int m, const PhysicalGrid& grid) {
    const double pi = std::acos(-1.0);
    Eigen::MatrixXd b(grid.nz, m + 1);
    for (int j = 0; j < grid.nz; ++j) {
        const double z = grid.z(j);
        for (int k = 0; k <= m; ++k)
            b(j, k) = parity == Parity::Even ? std::cos(pi * k * z) : std::sin(pi * k * z);
    }
    return b;
}

}  // namespace

Eigen::MatrixXd zmult_gram(const Eigen::VectorXd& rho_samples, Parity parity, int m,
                           const PhysicalGrid& grid) {
    if (rho_samples.size() != grid.nz) throw Error("zmult_gram: rho sample count mismatch");
    if (grid.band_capacity() < m) throw GridTooCoarse("zmult_gram: grid cannot carry band");
    // Split rho = cbar + rho' and add the constant part analytically: under
    // the band precondition (m <= nz-2) the trapezoid rule integrates every
    // basis product exactly, so the discrete unit gram equals its continuum
    // diagonal and only the remainder needs quadrature. This keeps quadrature
    // roundoff proportional to the density VARIATION (zero for constant
    // profiles) instead of its magnitude.
    const double cbar = 0.5 * (rho_samples.minCoeff() + rho_samples.maxCoeff());
    Eigen::MatrixXd b = z_basis(parity, m, grid);
    Eigen::VectorXd rw(grid.nz);
    for (int j = 0; j < grid.nz; ++j) rw[j] = (rho_samples[j] - cbar) * grid.wz(j);
    Eigen::MatrixXd g = b.transpose() * rw.asDiagonal() * b;
    g = 0.5 * (g + g.transpose());  // symmetrize roundoff
    for (int k = 0; k <= m; ++k) {
        const double unit = (parity == Parity::Even) ? (k == 0 ? 1.0 : 0.5)
                                                     : (k == 0 ? 0.0 : 0.5);
        g(k, k) += cbar * unit;
    }
    return g;
}

Eigen::MatrixXd zmult_matrix(const Eigen::VectorXd& rho_samples, Parity parity, int m,
                             const PhysicalGrid& grid) {
    Eigen::MatrixXd g = zmult_gram(rho_samples, parity, m, grid);
    // Analysis normalization: cos k=0 row integrates against weight 1, all
    // other rows against weight 2. Odd parity has no k=0 mode.
    for (int k = 0; k <= m; ++k) {
        const double norm = (parity == Parity::Even && k == 0) ? 1.0 : 2.0;
        g.row(k) *= norm;
    }
    if (parity == Parity::Odd) {
        g.row(0).setZero();
        g.col(0).setZero();
    }
    return g;
}

MassMatrix::MassMatrix(const Eigen::VectorXd& rho_samples, int m, const PhysicalGrid& grid)
    : m_(m) {
    ge_ = zmult_gram(rho_samples, Parity::Even, m, grid);
    go_ = zmult_gram(rho_samples, Parity::Odd, m, grid);
    me_ = zmult_matrix(rho_samples, Parity::Even, m, grid);
    mo_raw_ = zmult_matrix(rho_samples, Parity::Odd, m, grid);
    mo_shim_ = mo_raw_;
    mo_shim_(0, 0) = 1.0;
    lue_.compute(me_);
    luo_.compute(mo_shim_);
    const double de = std::abs(lue_.determinant());
    const double dn = std::abs(luo_.determinant());
    if (!(de > 0.0) || !(dn > 0.0) || !std::isfinite(de) || !std::isfinite(dn))
        throw SingularSystem("mass operator is singular for this density profile");
}

SpectralField MassMatrix::apply(const SpectralField& f) const {
    if (f.m() != m_) throw Error("MassMatrix::apply: band mismatch");
    const Eigen::MatrixXd& mat = f.parity() == Parity::Even ? me_ : mo_raw_;
    SpectralField out(f.parity(), m_);
    out.coeffs().real() = mat * f.coeffs().real();
    out.coeffs().imag() = mat * f.coeffs().imag();
    out.enforce_symmetry();
    return out;
}

SpectralField MassMatrix::solve(const SpectralField& f) const {
    if (f.m() != m_) throw Error("MassMatrix::solve: band mismatch");
    const bool even = f.parity() == Parity::Even;
    const Eigen::MatrixXd& mat = even ? me_ : mo_shim_;
    const auto& lu = even ? lue_ : luo_;
    Eigen::MatrixXd xr = lu.solve(f.coeffs().real());
    Eigen::MatrixXd xi = lu.solve(f.coeffs().imag());
    // One pass of iterative refinement.
    xr += lu.solve(f.coeffs().real() - mat * xr);
    xi += lu.solve(f.coeffs().imag() - mat * xi);
    SpectralField out(f.parity(), m_);
    out.coeffs().real() = xr;
    out.coeffs().imag() = xi;
    out.enforce_symmetry();
    return out;
}

double MassMatrix::min_gram_eigenvalue(Parity p) const {
    const Eigen::MatrixXd& g = p == Parity::Even ? ge_ : go_;
    if (p == Parity::Even) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
    Eigen::MatrixXd sub = g.bottomRightCorner(m_, m_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double MassMatrix::max_identity_deviation() const {
    Eigen::MatrixXd de = me_ - Eigen::MatrixXd::Identity(m_ + 1, m_ + 1);
    Eigen::MatrixXd dod = mo_raw_;
    dod.bottomRightCorner(m_, m_) -= Eigen::MatrixXd::Identity(m_, m_);
    return std::max(de.cwiseAbs().maxCoeff(), dod.cwiseAbs().maxCoeff());
}

}  // namespace anelastic
