#include "anelastic/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "anelastic/errors.hpp"

namespace anelastic {

static GaussRule build_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        // Initial guess (Tricomi), then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 1024) throw Error("gauss_legendre: order out of range");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, int n, int n_sub) {
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        for (int j = 0; j < n_sub; ++j) {
            const double u0 = lo + (hi - lo) * j / n_sub;
            const double u1 = lo + (hi - lo) * (j + 1) / n_sub;
            s += integrate_gl(f, u0, u1, n);
        }
    }
    return s;
}

double integrate_singular(double k, double eps, const std::function<double(double)>& g,
                          double g0, double g1) {
    const int n_gauss = 256;
    auto wg = [&](double z) { return std::pow(z + eps, k) * g(z); };

    // Number of dyadic levels below z=1. For eps>0 grade until the weight is
    // resolved past the eps scale; for eps=0 grade deep and close with the
    // Taylor form of g at the bottom.
    int levels;
    if (eps > 0.0) {
        levels = 8;
        while (std::ldexp(1.0, -levels) > 0.25 * eps && levels < 48) ++levels;
        levels += 4;
    } else {
        levels = 40;
    }

    double s = 0.0;
    for (int j = 0; j < levels; ++j) {
        const double hi = std::ldexp(1.0, -j);
        const double lo = 0.5 * hi;
        s += integrate_gl(wg, lo, hi, n_gauss);
    }
    const double bottom = std::ldexp(1.0, -levels);
    if (eps > 0.0) {
        s += integrate_gl(wg, 0.0, bottom, n_gauss);
    } else {
        // int_0^d z^k (g0 + g1 z) dz, valid since k+1 > 0 whenever the caller
        // provides a finite integrand (checked here).
        if (k + 1.0 <= 0.0 && g0 != 0.0)
            throw DegenerateDenominator("integrate_singular: non-integrable endpoint weight");
        double tail = 0.0;
        if (g0 != 0.0) tail += g0 * std::pow(bottom, k + 1.0) / (k + 1.0);
        if (k + 2.0 > 0.0 && g1 != 0.0) tail += g1 * std::pow(bottom, k + 2.0) / (k + 2.0);
        s += tail;
    }
    return s;
}

}  // namespace anelastic
