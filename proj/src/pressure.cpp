#include "anelastic/pressure.hpp"

#include <cmath>

#include "anelastic/errors.hpp"

namespace anelastic {

PressureSystem::PressureSystem(const Eigen::VectorXd& rho_samples, int m,
                               const PhysicalGrid& grid)
    : m_(m) {
    const double pi = std::acos(-1.0);
    // Vertical multiply operators P_m(rho .) per parity.
    Eigen::MatrixXd me = zmult_matrix(rho_samples, Parity::Even, m, grid);
    Eigen::MatrixXd mo = zmult_matrix(rho_samples, Parity::Odd, m, grid);

    // Horizontal part: -pi^2 k1^2 Me. Vertical part: Dsc Mo Dcs where
    // Dcs = d/dz on cosines (mode k2 -> -pi k2 sine) and Dsc = d/dz on sines
    // (mode k2 -> +pi k2 cosine); combined entry (k,l) = -pi^2 k l Mo(k,l).
    const double pi2 = pi * pi;
    Eigen::MatrixXd vert(m + 1, m + 1);
    for (int k = 0; k <= m; ++k)
        for (int l = 0; l <= m; ++l) vert(k, l) = -pi2 * static_cast<double>(k * l) * mo(k, l);

    blocks_.resize(m + 1);
    lus_.resize(m + 1);
    for (int k1 = 0; k1 <= m; ++k1) {
        blocks_[k1] = vert - (pi2 * static_cast<double>(k1 * k1)) * me;
        if (k1 == 0) {
            lus_[0].compute(blocks_[0].bottomRightCorner(m_, m_));
        } else {
            lus_[k1].compute(blocks_[k1]);
        }
        const double d = std::abs(lus_[k1].determinant());
        if (!(d > 0.0) || !std::isfinite(d))
            throw SingularSystem("pressure operator block is singular (k1=" +
                                 std::to_string(k1) + ")");
    }
}

SpectralField PressureSystem::apply(const SpectralField& p) const {
    if (p.parity() != Parity::Even) throw Error("PressureSystem::apply: field must be even");
    if (p.m() != m_) throw Error("PressureSystem::apply: band mismatch");
    SpectralField out(Parity::Even, m_);
    for (int k1 = -m_; k1 <= m_; ++k1) {
        const int a = std::abs(k1);
        Eigen::VectorXcd col(m_ + 1);
        for (int k2 = 0; k2 <= m_; ++k2) col[k2] = p.at(k1, k2);
        Eigen::VectorXcd res = blocks_[a].cast<std::complex<double>>() * col;
        for (int k2 = 0; k2 <= m_; ++k2) out.at(k1, k2) = res[k2];
    }
    // Gauge direction: the constant mode is annihilated up to the roundoff in
    // the assembled block; pin it to exactly zero.
    out.at(0, 0) = 0.0;
    out.enforce_symmetry();
    return out;
}

SpectralField PressureSystem::solve(const SpectralField& rhs) const {
    if (rhs.parity() != Parity::Even) throw Error("PressureSystem::solve: rhs must be even");
    if (rhs.m() != m_) throw Error("PressureSystem::solve: band mismatch");
    const double nrm = std::sqrt(l2_norm_sq(rhs));
    if (std::abs(rhs.at(0, 0)) > kCompatTol * std::max(nrm, 1e-300))
        throw IncompatibleRHS("pressure right-hand side has a mean component: |mean coeff| = " +
                              std::to_string(std::abs(rhs.at(0, 0))));

    SpectralField p(Parity::Even, m_);
    double res_sq = 0.0;
    for (int k1 = 0; k1 <= m_; ++k1) {
        const int nk = (k1 == 0) ? m_ : m_ + 1;
        const int off = (k1 == 0) ? 1 : 0;
        Eigen::MatrixXd b(nk, 2);
        for (int k2 = 0; k2 < nk; ++k2) {
            b(k2, 0) = rhs.at(k1, k2 + off).real();
            b(k2, 1) = rhs.at(k1, k2 + off).imag();
        }
        const Eigen::MatrixXd blk = (k1 == 0)
                                        ? blocks_[0].bottomRightCorner(m_, m_).eval()
                                        : blocks_[k1];
        Eigen::MatrixXd x = lus_[k1].solve(b);
        x += lus_[k1].solve(b - blk * x);  // one refinement pass
        res_sq += (blk * x - b).squaredNorm();  // quadrature-free block residual
        for (int k2 = 0; k2 < nk; ++k2) {
            const std::complex<double> val{x(k2, 0), x(k2, 1)};
            p.at(k1, k2 + off) = val;
            if (k1 > 0) p.at(-k1, k2 + off) = std::conj(val);
        }
        if (k1 == 0) p.at(0, 0) = 0.0;
    }
    p.enforce_symmetry();
    // Block residuals are per-(k1>=0); the L2 residual weighs k1 and -k1.
    SpectralField check = apply(p);
    check -= rhs;
    check.at(0, 0) = 0.0;
    last_residual_ = std::sqrt(l2_norm_sq(check));
    last_rel_residual_ = nrm > 0.0 ? last_residual_ / nrm : 0.0;
    (void)res_sq;
    return p;
}

double PressureSystem::rcond() const {
    double worst = 1.0;
    for (int k1 = 0; k1 <= m_; ++k1) worst = std::min(worst, lus_[k1].rcond());
    return worst;
}

Eigen::MatrixXd PressureSystem::dense_matrix() const {
    const int dim = (2 * m_ + 1) * (m_ + 1) - 1;
    // Real-coefficient slot of mode (k1,k2), re=0/1 for Re/Im. k1 in 0..m.
    auto idx = [&](int k1, int k2, int re) {
        int base = (k2 == 0) ? 0 : 2 * m_ + (k2 - 1) * (2 * m_ + 1);
        if (k2 == 0) {
            // row k2=0: modes k1=1..m, two slots each
            return base + 2 * (k1 - 1) + re;
        }
        if (k1 == 0) return base;  // single Re slot
        return base + 1 + 2 * (k1 - 1) + re;
    };
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    for (int k1 = 0; k1 <= m_; ++k1) {
        const Eigen::MatrixXd& blk = blocks_[k1];
        const int nre = (k1 == 0) ? 1 : 2;
        for (int re = 0; re < nre; ++re)
            for (int k2 = 0; k2 <= m_; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                for (int l2 = 0; l2 <= m_; ++l2) {
                    if (k1 == 0 && l2 == 0) continue;
                    d(idx(k1, k2, re), idx(k1, l2, re)) = blk(k2, l2);
                }
            }
    }
    return d;
}

SpectralField pressure_rhs(const SpectralField& v, const SpectralField& w,
                           const SpectralField& nv, const SpectralField& nw) {
    SpectralField rhs = dx(laplacian(v));
    rhs += dz(laplacian(w));
    rhs -= dx(nv);
    rhs -= dz(nw);
    return rhs;
}

}  // namespace anelastic
