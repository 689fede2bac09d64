#include "anelastic/spectral.hpp"

#include <cmath>
#include <numbers>

namespace anelastic {

namespace {
constexpr double kPi = std::numbers::pi;

/// L2 weight of one basis mode: integral over [0,2]x[0,1] of the squared
/// basis function is 2 * nu(k2), nu = 1 for the cos k2=0 mode, 1/2 otherwise.
inline double nu(Parity p, int k2) { return (p == Parity::Even && k2 == 0) ? 1.0 : 0.5; }
}  // namespace

std::vector<std::pair<int, int>> ModeSet::modes() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(count(m));
    for (int k2 = 0; k2 <= m; ++k2)
        for (int k1 = -m; k1 <= m; ++k1) out.emplace_back(k1, k2);
    return out;
}

void SpectralField::enforce_symmetry() {
    for (int k2 = 0; k2 <= m_; ++k2) {
        for (int k1 = 1; k1 <= m_; ++k1) {
            const auto avg = 0.5 * (c_(k2, m_ + k1) + std::conj(c_(k2, m_ - k1)));
            c_(k2, m_ + k1) = avg;
            c_(k2, m_ - k1) = std::conj(avg);
        }
        c_(k2, m_) = std::complex<double>(c_(k2, m_).real(), 0.0);
    }
    if (parity_ == Parity::Odd) c_.row(0).setZero();
}

double SpectralField::symmetry_defect() const {
    double d = 0.0;
    for (int k2 = 0; k2 <= m_; ++k2) {
        for (int k1 = 0; k1 <= m_; ++k1) {
            d = std::max(d, std::abs(c_(k2, m_ + k1) - std::conj(c_(k2, m_ - k1))));
        }
    }
    if (parity_ == Parity::Odd) d = std::max(d, c_.row(0).cwiseAbs().maxCoeff());
    return d;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    c_ += o.c_;
    return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
    c_ -= o.c_;
    return *this;
}
SpectralField& SpectralField::operator*=(double s) {
    c_ *= s;
    return *this;
}

double PhysicalGrid::inner(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g) const {
    double s = 0.0;
    for (int j = 0; j < nz; ++j) s += wz(j) * f.row(j).dot(g.row(j));
    return s * wx();
}

double PhysicalGrid::integrate(const Eigen::MatrixXd& f) const {
    double s = 0.0;
    for (int j = 0; j < nz; ++j) s += wz(j) * f.row(j).sum();
    return s * wx();
}

Transform::Transform(int m, PhysicalGrid g) : m_(m), g_(g) {
    if (g.band_capacity() < m) {
        throw GridTooCoarse("grid " + std::to_string(g.nx) + "x" + std::to_string(g.nz) +
                            " cannot represent band " + std::to_string(m));
    }
    const int nz = g.nz, nx = g.nx;
    zc_.resize(nz, m + 1);
    zs_.resize(nz, m + 1);
    azc_.resize(m + 1, nz);
    azs_.resize(m + 1, nz);
    for (int j = 0; j < nz; ++j) {
        const double z = g.z(j);
        for (int k = 0; k <= m; ++k) {
            zc_(j, k) = std::cos(kPi * k * z);
            zs_(j, k) = std::sin(kPi * k * z);
            const double norm_c = (k == 0) ? 1.0 : 2.0;
            azc_(k, j) = norm_c * g.wz(j) * zc_(j, k);
            azs_(k, j) = 2.0 * g.wz(j) * zs_(j, k);
        }
    }
    azs_.row(0).setZero();
    exr_.resize(nx, 2 * m + 1);
    exi_.resize(nx, 2 * m + 1);
    for (int i = 0; i < nx; ++i) {
        const double x = g.x(i);
        for (int k1 = -m; k1 <= m; ++k1) {
            exr_(i, k1 + m) = std::cos(kPi * k1 * x);
            exi_(i, k1 + m) = std::sin(kPi * k1 * x);
        }
    }
}

Eigen::MatrixXd Transform::synthesize(const SpectralField& f) const {
    const Eigen::MatrixXd& zb = f.parity() == Parity::Even ? zc_ : zs_;
    const Eigen::MatrixXd tre = zb * f.coeffs().real();
    const Eigen::MatrixXd tim = zb * f.coeffs().imag();
    return tre * exr_.transpose() - tim * exi_.transpose();
}

SpectralField Transform::analyze(const Eigen::MatrixXd& samples, Parity parity) const {
    const Eigen::MatrixXd& az = parity == Parity::Even ? azc_ : azs_;
    const Eigen::MatrixXd gr = samples * exr_ / g_.nx;
    const Eigen::MatrixXd gi = samples * exi_ / g_.nx;
    SpectralField f(parity, m_);
    f.coeffs().real() = az * gr;
    f.coeffs().imag() = -(az * gi);
    f.enforce_symmetry();
    return f;
}

Eigen::VectorXd Transform::synthesize_row(const SpectralField& f, double z0) const {
    Eigen::VectorXd zb(m_ + 1);
    for (int k = 0; k <= m_; ++k)
        zb(k) = f.parity() == Parity::Even ? std::cos(kPi * k * z0) : std::sin(kPi * k * z0);
    Eigen::VectorXcd s = f.coeffs().transpose() * zb;
    return exr_ * s.real() - exi_ * s.imag();
}

SpectralField dx(const SpectralField& f) {
    SpectralField out(f.parity(), f.m());
    const int m = f.m();
    for (int k1 = -m; k1 <= m; ++k1) {
        out.coeffs().col(k1 + m) = std::complex<double>(0.0, kPi * k1) * f.coeffs().col(k1 + m);
    }
    return out;
}

SpectralField dz(const SpectralField& f) {
    const bool even = f.parity() == Parity::Even;
    SpectralField out(even ? Parity::Odd : Parity::Even, f.m());
    for (int k2 = 0; k2 <= f.m(); ++k2) {
        const double fac = even ? -kPi * k2 : kPi * k2;
        out.coeffs().row(k2) = fac * f.coeffs().row(k2);
    }
    return out;
}

SpectralField dzz(const SpectralField& f) {
    SpectralField out = f;
    for (int k2 = 0; k2 <= f.m(); ++k2) {
        out.coeffs().row(k2) *= -kPi * kPi * k2 * k2;
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    const int m = f.m();
    for (int k2 = 0; k2 <= m; ++k2)
        for (int k1 = -m; k1 <= m; ++k1)
            out.coeffs()(k2, k1 + m) *= -kPi * kPi * (k1 * k1 + k2 * k2);
    return out;
}

SpectralField project(const SpectralField& f, int m_out) {
    SpectralField out(f.parity(), m_out);
    const int m = f.m(), keep = std::min(m, m_out);
    for (int k2 = 0; k2 <= keep; ++k2)
        for (int k1 = -keep; k1 <= keep; ++k1) out.at(k1, k2) = f.at(k1, k2);
    return out;
}

SpectralField multiply_fields(const SpectralField& a, const SpectralField& b) {
    const int mo = a.m() + b.m();
    const PhysicalGrid g = PhysicalGrid::for_band(mo);
    const Transform ta(a.m(), g), tb(b.m(), g), to(mo, g);
    const Eigen::MatrixXd prod = ta.synthesize(a).cwiseProduct(tb.synthesize(b));
    return to.analyze(prod, product_parity(a.parity(), b.parity()));
}

double domain_mean_integral(const SpectralField& f) {
    return f.parity() == Parity::Even ? 2.0 * f.at(0, 0).real() : 0.0;
}

double inner_l2(const SpectralField& a, const SpectralField& b) {
    double s = 0.0;
    const int m = a.m();
    for (int k2 = 0; k2 <= m; ++k2) {
        const double w = 2.0 * nu(a.parity(), k2);
        for (int k1 = -m; k1 <= m; ++k1) {
            s += w * (std::conj(a.at(k1, k2)) * b.at(k1, k2)).real();
        }
    }
    return s;
}

double l2_norm_sq(const SpectralField& f) { return inner_l2(f, f); }

double grad_norm_sq(const SpectralField& f) {
    double s = 0.0;
    const int m = f.m();
    for (int k2 = 0; k2 <= m; ++k2) {
        const double w = 2.0 * nu(f.parity(), k2);
        for (int k1 = -m; k1 <= m; ++k1) {
            s += w * kPi * kPi * (k1 * k1 + k2 * k2) * std::norm(f.at(k1, k2));
        }
    }
    return s;
}

double hs_norm_sq(const SpectralField& f, int s) {
    double acc = 0.0;
    const int m = f.m();
    for (int k2 = 0; k2 <= m; ++k2) {
        const double w = 2.0 * nu(f.parity(), k2);
        for (int k1 = -m; k1 <= m; ++k1) {
            const double lam = kPi * kPi * (k1 * k1 + k2 * k2);
            double mult = 1.0, p = 1.0;
            for (int j = 1; j <= s; ++j) {
                p *= lam;
                mult += p;
            }
            acc += w * mult * std::norm(f.at(k1, k2));
        }
    }
    return acc;
}

}  // namespace anelastic
