// Tests for the vanishing-density machinery: the regularization sweep with
// its support/resolution guards and Cauchy metrics, and the two-trajectory
// stability probe with its exponential envelope.
#include "doctest.h"

#include <cmath>
#include <vector>

#include "anelastic/config.hpp"
#include "anelastic/errors.hpp"
#include "anelastic/vacuum.hpp"

using namespace anelastic;

namespace {

SweepConfig sweep_config() {
    SweepConfig sc;
    sc.base.m = 16;
    sc.base.dt = 5e-4;
    sc.base.t_end = 4e-3;
    sc.base.scheme = "imex-euler";
    sc.base.cadence = 2;
    sc.base.density.kind = "regularized";
    sc.base.density.alpha = 2.0;
    sc.base.density.epsilon = 0.25;  // placeholder; swept runs set their own
    sc.base.density.has_epsilon = true;
    sc.base.initial.type = "stream_bump";
    sc.base.initial.amplitude = 0.05;
    sc.base.initial.delta = 0.2;
    sc.j_min = 2;
    sc.j_max = 4;
    return sc;
}

ProbeConfig probe_config(double eta) {
    ProbeConfig pc;
    pc.base.m = 8;
    pc.base.dt = 1e-3;
    pc.base.t_end = 0.01;
    pc.base.scheme = "rk4";
    pc.base.cadence = 1;
    pc.base.density.kind = "constant";
    pc.base.density.constant_value = 1.0;
    pc.base.initial.type = "taylor_green";
    pc.base.initial.amplitude = 0.5;
    pc.eta = eta;
    pc.x_mode2 = 2;
    pc.delta2 = 0.2;
    return pc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sweep guards.
// ---------------------------------------------------------------------------
TEST_CASE("sweep rejects initial support that meets the widest mollification") {
    SweepConfig sc = sweep_config();
    // eps_max = 2^-2 = 1/4; margin must exceed eps_max / 2 = 1/8.
    sc.base.initial.delta = 0.1;
    CHECK_THROWS_AS(epsilon_sweep(sc), SupportTooWide);
    sc.base.initial.delta = 0.125;  // boundary case is also rejected
    CHECK_THROWS_AS(epsilon_sweep(sc), SupportTooWide);
}

TEST_CASE("sweep rejects epsilons below the resolution floor") {
    SweepConfig sc = sweep_config();
    sc.base.m = 8;   // floor 1/(2m) = 1/16
    sc.j_max = 5;    // eps_min = 1/32 < 1/16
    CHECK_THROWS_AS(epsilon_sweep(sc), ResolutionError);
}

TEST_CASE("sweep config validation rejects constant density and bad ranges") {
    SweepConfig sc = sweep_config();
    sc.base.density.kind = "constant";
    CHECK_THROWS_AS(sc.validate(), ConfigInvalid);

    sc = sweep_config();
    sc.j_max = sc.j_min;  // need at least two runs
    CHECK_THROWS_AS(sc.validate(), ConfigInvalid);
}

// ---------------------------------------------------------------------------
// A short sweep end to end.
// ---------------------------------------------------------------------------
TEST_CASE("epsilon sweep produces per-run summaries and pair metrics") {
    SweepConfig sc = sweep_config();
    std::vector<std::string> log;
    SweepResult sr = epsilon_sweep(sc, [&](const std::string& s) { log.push_back(s); });

    REQUIRE(sr.runs.size() == 3);
    REQUIRE(sr.pairs.size() == 2);
    CHECK(log.size() == 3);

    for (size_t n = 0; n < sr.runs.size(); ++n) {
        const SweepRunSummary& s = sr.runs[n];
        CHECK(s.j == sc.j_min + int(n));
        CHECK(s.eps == doctest::Approx(std::ldexp(1.0, -s.j)));
        CHECK(s.sup_qhalf_u > 0.0);
        CHECK(s.sup_ut_weighted > 0.0);
        CHECK(std::isfinite(s.sup_grad_ut_sq));
        CHECK(std::isfinite(s.sup_enstrophy_h));
        CHECK(std::isfinite(s.sup_dzz_weighted));
        CHECK(std::isfinite(s.sup_p_weighted));
        CHECK(s.diss_integral >= 0.0);
        CHECK(s.rho_min > 0.0);
        CHECK(s.c_eps > 0.0);
        CHECK(std::isfinite(s.duality_integral));
        CHECK(s.q_h3 >= 0.0);
    }
    // Smaller epsilon means a smaller density floor.
    CHECK(sr.runs[1].rho_min < sr.runs[0].rho_min);
    CHECK(sr.runs[2].rho_min < sr.runs[1].rho_min);

    for (const SweepPairMetric& p : sr.pairs) {
        CHECK(p.eps_hi == doctest::Approx(2.0 * p.eps_lo));
        CHECK(std::isfinite(p.sup_weighted_diff));
        CHECK(p.sup_weighted_diff > 0.0);
        CHECK(p.grad_diff_integral >= 0.0);
    }

    // The reported flag must agree with the pair table it came from.
    bool mono = true;
    for (size_t n = 0; n + 1 < sr.pairs.size(); ++n)
        if (sr.pairs[n + 1].sup_weighted_diff > sr.pairs[n].sup_weighted_diff) mono = false;
    CHECK(sr.cauchy_nonincreasing == mono);

    // The marginally-resolved epsilon (1/16 at m = 16) is warned about.
    CHECK(!sr.warnings.empty());
}

// ---------------------------------------------------------------------------
// Stability probe.
// ---------------------------------------------------------------------------
TEST_CASE("stability probe stays within the exponential envelope") {
    ProbeResult pr = stability_probe(probe_config(1e-3));
    CHECK(pr.eta == doctest::Approx(1e-3));
    CHECK(pr.initial_diff_sq > 0.0);
    // The perturbation has size eta in the weighted norm up to the projection
    // and bump normalization; it must scale with eta^2, not eta.
    CHECK(pr.initial_diff_sq < 1e-4);
    CHECK(pr.sup_diff_sq >= pr.initial_diff_sq * 0.5);
    CHECK(pr.c_measured > 0.0);
    CHECK(pr.envelope == doctest::Approx(10.0 * std::exp(pr.c_measured) *
                                         pr.initial_diff_sq));
    CHECK(pr.within_envelope);
    CHECK(pr.sup_diff_sq <= pr.envelope);
    REQUIRE(pr.times.size() == pr.diff_sq_series.size());
    REQUIRE(pr.times.size() >= 2);
    CHECK(pr.times.front() == doctest::Approx(0.0));
    CHECK(pr.times.back() == doctest::Approx(0.01));
}

TEST_CASE("halving the perturbation halves the weighted difference") {
    ProbeResult a = stability_probe(probe_config(1e-3));
    ProbeResult b = stability_probe(probe_config(5e-4));
    // sup_diff_sq is quadratic in the perturbation size in the linear regime:
    // the sup of the weighted difference itself must halve within 10%.
    const double ratio = std::sqrt(b.sup_diff_sq / a.sup_diff_sq);
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
}
