#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anelastic/config.hpp"
#include "anelastic/diagnostics.hpp"
#include "anelastic/galerkin.hpp"

namespace anelastic {

/// Per-epsilon uniform-bound summary extracted from a swept run.
struct SweepRunSummary {
    int j = 0;                      // epsilon = 2^{-j}
    double eps = 0.0;
    double sup_qhalf_u = 0.0;       // sup_t sqrt(int rho |u|^2)
    double sup_ut_weighted = 0.0;   // sup_t sqrt(int rho |u_t|^2)
    double sup_grad_ut_sq = 0.0;    // sup_t int |grad u_t|^2
    double sup_enstrophy_h = 0.0;   // sup_t int |grad v|^2
    double sup_dzz_weighted = 0.0;  // sup_t sqrt(int rho^2 |d_zz u|^2)
    double sup_p_weighted = 0.0;    // sup_t sqrt(int rho^4 |grad p|^2)
    double diss_integral = 0.0;     // int_0^T 2||grad u||^2 dt
    double pressure_rcond = 0.0;
    double rho_min = 0.0;
    double q_h3 = 0.0;
    double duality_integral = 0.0;  // time integral of the duality pairing
    double c_eps = 0.0;             // duality normalization constant
};

/// Difference metrics between two consecutive runs (weights taken from the
/// smaller-epsilon density).
struct SweepPairMetric {
    double eps_hi = 0.0, eps_lo = 0.0;
    double sup_weighted_diff = 0.0;     // sup_t sqrt(int rho_lo |u_hi - u_lo|^2)
    double grad_diff_integral = 0.0;    // int_0^T ||grad(u_hi - u_lo)||^2 dt
};

struct SweepResult {
    std::vector<SweepRunSummary> runs;
    std::vector<SweepPairMetric> pairs;
    bool cauchy_nonincreasing = false;  // sup metrics non-increasing in pair index
    std::vector<std::string> warnings;
};

/// Runs the configured problem for epsilon_j = 2^{-j}, j = j_min..j_max, and
/// assembles pairwise Cauchy metrics and uniform-bound tables.
///
/// Guards: the stream-bump support margin delta must exceed eps_{j_min}/2
/// (SupportTooWide otherwise), and every epsilon must satisfy the resolution
/// floor eps >= 1/(2m) (ResolutionError otherwise). Runs that would be under-
/// resolved but above the floor only produce warnings.
SweepResult epsilon_sweep(const SweepConfig& cfg,
                          const std::function<void(const std::string&)>& log = {});

/// Result of the two-run stability probe.
struct ProbeResult {
    double eta = 0.0;
    double initial_diff_sq = 0.0;        // int rho |delta u(0)|^2
    double sup_diff_sq = 0.0;            // sup_t int rho |u1 - u2|^2
    double c_measured = 0.0;             // int (1 + ||grad u2||^2) dt
    double envelope = 0.0;               // 10 exp(C) * initial_diff_sq
    bool within_envelope = false;
    std::vector<double> times;
    std::vector<double> diff_sq_series;
};

/// Integrates the base problem and an eta-perturbed copy side by side and
/// audits the weighted difference against the exponential stability envelope.
ProbeResult stability_probe(const ProbeConfig& cfg);

}  // namespace anelastic
