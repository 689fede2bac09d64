#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace anelastic {

/// Gauss-Legendre rule on [-1,1]; nodes and weights.
struct GaussRule {
    Eigen::VectorXd x, w;
};

/// Cached rule of the given order (Newton iteration on the Legendre
/// recurrence; accurate to machine precision).
const GaussRule& gauss_legendre(int n);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

/// Composite rule over [a,b] split at the given interior breakpoints,
/// n-point Gauss per piece (pieces additionally subdivided n_sub times).
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, int n = 64, int n_sub = 8);

/// Integral over [0,1] of w(z) g(z) where w(z) = (z+eps)^k may be singular at
/// z=0 when eps=0. Dyadically graded composite Gauss (256 points per dyadic
/// subinterval); for eps=0 the bottom fragment uses the two-term Taylor
/// closed form with g(0)=g0 and g'(0)=g1 supplied by the caller.
double integrate_singular(double k, double eps, const std::function<double(double)>& g,
                          double g0, double g1);

}  // namespace anelastic
