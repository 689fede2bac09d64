#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "anelastic/errors.hpp"

namespace anelastic {

/// Regularized boundary-distance profile on [0,1]:
///   q_eps(z) = eps/2        on [0, eps/4]
///   q_eps(z) = blend(z)     on [eps/4, eps/2]
///   q_eps(z) = z(2-z)       on [eps/2, 1]
/// The blend is the degree-7 two-point Hermite interpolant matching value and
/// first three derivatives of the adjacent branches, so the even-periodic
/// extension of q_eps is C^3. q_eps is non-decreasing and satisfies
/// (z+eps)/4 <= q_eps(z) <= 2(z+eps).
class QEps {
  public:
    QEps() = default;

    double eps() const { return eps_; }
    double seam_lo() const { return a_; }
    double seam_hi() const { return b_; }
    /// Monomial coefficients of the blend in t = (z - seam_lo())/width.
    const std::array<double, 8>& blend_coeffs() const { return c_; }

    double value(double z) const;
    double d1(double z) const;
    double d2(double z) const;
    double d3(double z) const;

    /// value/d1/d2/d3 evaluated on one side of a point (side < 0 means the
    /// branch valid just left of z). Used for seam-continuity certification.
    std::array<double, 4> one_sided(double z, int side) const;

  private:
    friend QEps make_q_eps(double eps);
    double eps_ = 0.0, a_ = 0.0, b_ = 0.0, h_ = 0.0;
    std::array<double, 8> c_{};  // blend monomial coefficients in t
    int branch(double z) const;  // 0 constant, 1 blend, 2 parabola
};

/// Builds the profile and scan-verifies that the blend is non-decreasing.
/// Throws ConfigInvalid for eps outside (0,1), BlendNotMonotone on failure.
QEps make_q_eps(double eps);

/// Measured certificate for the q_eps profile properties.
struct ProfileProperties {
    double eps = 0.0;
    double sup_deviation = 0.0;        // sup |q_eps - z(2-z)|; bound: eps
    bool deviation_ok = false;
    double seam_jump = 0.0;            // max one-sided mismatch, orders 0..3
    double periodization_jump = 0.0;   // FD 3rd-derivative jump at z in {0,1}
    bool c3_ok = false;
    bool monotone_ok = false;
    double envelope_low_defect = 0.0;  // min of q - (z+eps)/4; bound: >= 0
    double envelope_high_defect = 0.0; // min of 2(z+eps) - q; bound: >= 0
    bool envelope_ok = false;
    double derivative_sup = 0.0;       // sup |q'| + |q q''| + |q^2 q'''|
    bool derivative_sup_ok = false;

    bool all_ok() const {
        return deviation_ok && c3_ok && monotone_ok && envelope_ok && derivative_sup_ok;
    }
};

/// Scans the profile on n_grid points (plus seam-refined subgrids) and
/// evaluates every property certificate.
ProfileProperties verify_profile_properties(const QEps& q, int n_grid = 4096);

/// Stratified density rho(z) on [0,1], even about both endpoints.
class DensityProfile {
  public:
    enum class Kind { Constant, SmoothNonDegenerate, PhysicalVacuum, Regularized };

    static DensityProfile constant(double value);
    static DensityProfile smooth(std::function<double(double)> rho,
                                 std::function<double(double)> drho,
                                 std::function<double(double)> d2rho,
                                 std::string label);
    /// rho = (z(2-z))^alpha; requires alpha > 3/2. Degenerate at z=0.
    static DensityProfile physical_vacuum(double alpha);
    /// rho = q_eps^alpha; requires alpha > 3/2, eps in (0,1).
    static DensityProfile regularized(double alpha, double eps);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double epsilon() const { return eps_; }
    double constant_value() const { return value_; }

    double rho(double z) const;
    double drho(double z) const;
    double d2rho(double z) const;

    /// Infimum of rho over [0,1] (exact for constant/vacuum/regularized,
    /// 4096-point scan for smooth profiles).
    double min_rho() const;
    bool strictly_positive() const { return min_rho() > 0.0; }

    /// The regularized profile's q_eps; nullptr for other kinds.
    const QEps* q() const { return kind_ == Kind::Regularized ? &q_ : nullptr; }

    std::string describe() const;

  private:
    DensityProfile() = default;
    Kind kind_ = Kind::Constant;
    double alpha_ = 0.0, eps_ = 0.0, value_ = 1.0;
    QEps q_;
    std::function<double(double)> f_, f1_, f2_;
    std::string label_;
};

/// Symmetric periodic extension of samples on [0,1] (n samples including both
/// endpoints) to the length-2 period [-1,1): output index j corresponds to
/// z = -1 + j/(n-1), 2(n-1) samples. Even parity reflects; odd parity reflects
/// with sign and requires f[0] == 0 (the z=-1 sample averages the two
/// one-sided limits, which forces 0 for odd data).
std::vector<double> extend_sp(const std::vector<double>& f, bool odd);

}  // namespace anelastic
