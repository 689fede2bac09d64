#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "anelastic/errors.hpp"

namespace anelastic {

/// z-parity of a field on the strip: Even expands in cos(pi k2 z), Odd in
/// sin(pi k2 z). Products follow the usual rules (Odd*Odd = Even, ...).
enum class Parity { Even, Odd };

inline Parity product_parity(Parity a, Parity b) {
    return a == b ? Parity::Even : Parity::Odd;
}

/// Rectangular mode set {-m <= k1 <= m, 0 <= k2 <= m}.
struct ModeSet {
    int m = 0;

    /// Number of (k1,k2) pairs.
    static long count(int m) { return static_cast<long>(2 * m + 1) * (m + 1); }

    /// Real dimension of one velocity pair plus gauge-fixed pressure after the
    /// conjugate-symmetry reduction: 3(2m+1)(m+1) - 1.
    static long real_dimension(int m) { return 3 * count(m) - 1; }

    /// Modes in deterministic order: k2 outer (0..m), k1 inner (-m..m).
    std::vector<std::pair<int, int>> modes() const;
};

/// Band-limited field c(k2, k1) with the reality condition
/// c(k1,k2) = conj(c(-k1,k2)). Odd-parity fields have a zero k2=0 row.
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(Parity parity, int m)
        : parity_(parity), m_(m), c_(Eigen::MatrixXcd::Zero(m + 1, 2 * m + 1)) {}

    Parity parity() const { return parity_; }
    int m() const { return m_; }

    std::complex<double>& at(int k1, int k2) { return c_(k2, k1 + m_); }
    std::complex<double> at(int k1, int k2) const { return c_(k2, k1 + m_); }

    Eigen::MatrixXcd& coeffs() { return c_; }
    const Eigen::MatrixXcd& coeffs() const { return c_; }

    /// Projects exactly onto the admissible set: conjugate symmetry in k1 and,
    /// for odd parity, a zero k2=0 row.
    void enforce_symmetry();
    /// max |c(k1,k2) - conj(c(-k1,k2))| plus any odd-parity k2=0 content.
    double symmetry_defect() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  private:
    Parity parity_ = Parity::Even;
    int m_ = 0;
    Eigen::MatrixXcd c_;
};

/// Collocation grid on [0,2) x [0,1]: x uniform-periodic (nx points), z
/// uniform including both endpoints (nz points). Trapezoid weights in z are
/// exact for the cos/sin bases up to the grid's band capacity.
struct PhysicalGrid {
    int nx = 0, nz = 0;

    /// Smallest grid whose quadrature is exact for products of two fields of
    /// the given total band: nx = 2B+2, nz = B+2.
    static PhysicalGrid for_band(int B) { return {2 * B + 2, B + 2}; }

    double x(int i) const { return 2.0 * i / nx; }
    double z(int j) const { return static_cast<double>(j) / (nz - 1); }
    double wx() const { return 2.0 / nx; }
    double wz(int j) const {
        const double h = 1.0 / (nz - 1);
        return (j == 0 || j == nz - 1) ? 0.5 * h : h;
    }
    /// Largest band B with exact analyze/synthesize round-trip and exact
    /// band-B x band-B quadrature pairing.
    int band_capacity() const { return std::min((nx - 1) / 2, nz - 2); }

    /// Quadrature sum of the pointwise product of two sample sets.
    double inner(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g) const;
    double integrate(const Eigen::MatrixXd& f) const;
};

/// Direct (matrix-product) transform pair between band-m coefficients and
/// grid samples. Analysis is the quadrature adjoint of synthesis, so
/// analyze(synthesize(f)) == f exactly for band m <= grid capacity.
class Transform {
  public:
    Transform(int m, PhysicalGrid g);

    const PhysicalGrid& grid() const { return g_; }
    int m() const { return m_; }

    Eigen::MatrixXd synthesize(const SpectralField& f) const;  // nz x nx samples
    SpectralField analyze(const Eigen::MatrixXd& samples, Parity parity) const;

    /// Field values along one horizontal line z = z0 (nx samples).
    Eigen::VectorXd synthesize_row(const SpectralField& f, double z0) const;

  private:
    int m_;
    PhysicalGrid g_;
    Eigen::MatrixXd zc_, zs_;    // nz x (m+1) synthesis bases
    Eigen::MatrixXd azc_, azs_;  // (m+1) x nz weighted analysis bases
    Eigen::MatrixXd exr_, exi_;  // nx x (2m+1) cos/sin of pi k1 x
};

SpectralField dx(const SpectralField& f);
/// d/dz flips parity: cos -> sin with factor -pi k2, sin -> cos with +pi k2.
SpectralField dz(const SpectralField& f);
SpectralField dzz(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);

/// Truncation (m_out <= f.m()) or zero-padded embedding (m_out > f.m()).
SpectralField project(const SpectralField& f, int m_out);

/// Exact coefficients of the pointwise product, band-limited at
/// a.m() + b.m(), computed on a grid large enough that no aliasing occurs.
SpectralField multiply_fields(const SpectralField& a, const SpectralField& b);

/// Integral of f over the domain (= 2 * c(0,0) for even fields).
double domain_mean_integral(const SpectralField& f);

double inner_l2(const SpectralField& a, const SpectralField& b);
double l2_norm_sq(const SpectralField& f);
double grad_norm_sq(const SpectralField& f);
/// Sum of squared L2 norms of all derivatives of order 0..s.
double hs_norm_sq(const SpectralField& f, int s);

}  // namespace anelastic
