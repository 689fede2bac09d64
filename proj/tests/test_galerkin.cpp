#include <cmath>
#include <complex>

#include "doctest.h"

#include "anelastic/density.hpp"
#include "anelastic/diagnostics.hpp"
#include "anelastic/errors.hpp"
#include "anelastic/galerkin.hpp"

using namespace anelastic;

namespace {
const double kPi = std::acos(-1.0);

RunConfig base_config() {
    RunConfig cfg;
    cfg.m = 4;
    cfg.dt = 1e-3;
    cfg.t_end = 0.02;
    cfg.scheme = "rk4";
    cfg.cadence = 1;
    cfg.density.kind = "constant";
    cfg.density.constant_value = 1.0;
    cfg.initial.type = "taylor_green";
    cfg.initial.amplitude = 1.0;
    return cfg;
}
}  // namespace

TEST_CASE("mass operator is the identity for unit density") {
    for (int m : {4, 8, 16}) {
        GalerkinOps ops(DensityProfile::constant(1.0), m);
        CHECK(ops.mass().max_identity_deviation() <= 1e-12);
    }
}

TEST_CASE("mass Gram matrices are positive definite for positive densities") {
    GalerkinOps smooth(DensityProfile::constant(0.37), 6);
    GalerkinOps reg(DensityProfile::regularized(2.0, 0.125), 8);
    for (const GalerkinOps* ops : {&smooth, &reg}) {
        CHECK(ops->mass().min_gram_eigenvalue(Parity::Even) > 0.0);
        CHECK(ops->mass().min_gram_eigenvalue(Parity::Odd) > 0.0);
        CHECK(ops->rho_min() > 0.0);
    }
}

TEST_CASE("Taylor-Green tendency is exactly diffusive") {
    const int m = 4;
    GalerkinOps ops(DensityProfile::constant(1.0), m);
    State s = taylor_green_state(m, 1.0);
    Tendency t = tendency(ops, s);

    SpectralField ev = t.dv - (-2.0 * kPi * kPi) * s.v;
    SpectralField ew = t.dw - (-2.0 * kPi * kPi) * s.w;
    CHECK(std::sqrt(l2_norm_sq(ev) + l2_norm_sq(ew)) <= 1e-12);

    CHECK(t.p.at(2, 0).real() == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(t.p.at(0, 2).real() == doctest::Approx(0.25).epsilon(1e-12));

    // g is the pre-mass-solve right-hand side: M du = g (M = identity here).
    SpectralField gv = t.gv - t.dv;
    CHECK(std::sqrt(l2_norm_sq(gv)) <= 1e-12);
}

TEST_CASE("rk4 reproduces the Taylor-Green decay factor per step") {
    const int m = 4;
    const double dt = 1e-3;
    GalerkinOps ops(DensityProfile::constant(1.0), m);
    State s = taylor_green_state(m, 1.0);
    const std::complex<double> before = s.v.at(1, 1);
    State s1 = rk4_step(ops, s, dt);
    const double factor = std::exp(-2.0 * kPi * kPi * dt);
    CHECK(std::abs(s1.v.at(1, 1) - factor * before) <= 5e-11 * std::abs(before));
    CHECK(s1.t == doctest::Approx(dt));

    // Over 20 steps the trajectory stays on the exact exponential decay.
    State cur = taylor_green_state(m, 1.0);
    for (int i = 0; i < 20; ++i) cur = rk4_step(ops, cur, dt);
    const double expect = std::exp(-2.0 * kPi * kPi * 20 * dt);
    SpectralField dvv = cur.v - expect * s.v;
    SpectralField dww = cur.w - expect * s.w;
    const double rel = std::sqrt(l2_norm_sq(dvv) + l2_norm_sq(dww)) /
                       (expect * std::sqrt(l2_norm_sq(s.v) + l2_norm_sq(s.w)));
    CHECK(rel <= 1e-9);
}

TEST_CASE("generalized stiffness reduces to the explicit heuristic for unit density") {
    for (int m : {4, 8}) {
        GalerkinOps ops(DensityProfile::constant(1.0), m);
        const double expect = 2.0 * kPi * kPi * m * m;
        CHECK(ops.generalized_stiffness() == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("prepare_initial restores the discrete constraint") {
    GalerkinOps ops(DensityProfile::regularized(2.0, 0.25), 8);
    State raw = stream_bump_state(ops, 0.1, 0.2, 1);
    const double before = ops.constraint_residual(raw);
    CHECK(before > 1e-12);  // sampled data does not satisfy the discrete constraint

    InitialConfig icfg;
    icfg.type = "stream_bump";
    icfg.amplitude = 0.1;
    icfg.delta = 0.2;
    icfg.x_mode = 1;
    double q_h3 = -1.0;
    State fixed = prepare_initial(ops, icfg, &q_h3);
    CHECK(q_h3 > 0.0);
    const double after = ops.constraint_residual(fixed);
    CHECK(after <= 1e-10 * std::max(1.0, std::sqrt(h1_norm_sq(fixed))));
}

TEST_CASE("constraint corrector norm shrinks when the band doubles") {
    DensityProfile prof = DensityProfile::regularized(2.0, 0.125);
    InitialConfig icfg;
    icfg.type = "stream_bump";
    icfg.amplitude = 0.1;
    icfg.delta = 0.2;
    icfg.x_mode = 1;
    double prev = 0.0;
    for (int m : {8, 16}) {
        GalerkinOps ops(prof, m);
        double q_h3 = 0.0;
        prepare_initial(ops, icfg, &q_h3);
        if (m > 8) CHECK(q_h3 < 0.7 * prev);
        prev = q_h3;
    }
}

TEST_CASE("run preserves the constraint and the energy identity at small scale") {
    RunConfig cfg = base_config();
    std::vector<DiagnosticsRecord> recs;
    GalerkinOps ops(cfg.density.make_profile(), cfg.m);
    RunResult rr = run(cfg, ops, [&](const Emission& e) { recs.push_back(diagnose(ops, e)); });

    CHECK(rr.steps == 20);
    CHECK(recs.size() == 21);
    CHECK(rr.max_constraint_ratio <= 1e-11);
    CHECK(rr.final_energy < rr.initial_energy);

    // The identity residual is dominated by the trapezoid quadrature of the
    // dissipation integral, O(dt^2 lambda^2): ~1.4e-4 relative at dt=1e-3.
    double max_eir = 0.0;
    for (const auto& r : recs) max_eir = std::max(max_eir, r.energy_identity_residual);
    CHECK(max_eir <= 3e-4 * rr.initial_energy);

    // Halving dt shrinks the identity residual by at least ~4 (trapezoid).
    RunConfig half = cfg;
    half.dt = cfg.dt / 2.0;
    std::vector<DiagnosticsRecord> recs2;
    run(half, ops, [&](const Emission& e) { recs2.push_back(diagnose(ops, e)); });
    double max_eir2 = 0.0;
    for (const auto& r : recs2) max_eir2 = std::max(max_eir2, r.energy_identity_residual);
    CHECK(max_eir2 <= max_eir / 3.0);
}

TEST_CASE("imex-euler stays stable above the explicit step bound") {
    RunConfig cfg;
    cfg.m = 8;
    cfg.scheme = "imex-euler";
    cfg.dt = 10.0 * cfg.rk4_dt_bound();
    cfg.t_end = 200.0 * cfg.dt;
    cfg.cadence = 10;
    cfg.density.kind = "regularized";
    cfg.density.alpha = 2.0;
    cfg.density.epsilon = 0.25;
    cfg.density.has_epsilon = true;
    cfg.initial.type = "stream_bump";
    cfg.initial.amplitude = 0.1;
    cfg.initial.delta = 0.2;

    GalerkinOps ops(cfg.density.make_profile(), cfg.m);
    std::vector<double> energies;
    RunResult rr =
        run(cfg, ops, [&](const Emission& e) { energies.push_back(weighted_energy(ops, e.state)); });
    CHECK(rr.steps == 200);
    for (size_t i = 1; i < energies.size(); ++i) CHECK(energies[i] <= energies[i - 1] * (1 + 1e-12));
    CHECK(rr.max_constraint_ratio <= 1e-9);
}

TEST_CASE("runaway trajectories trip the blowup guard") {
    RunConfig cfg = base_config();
    cfg.dt = 0.3;  // far beyond the explicit stability bound
    cfg.t_end = 30.0;
    cfg.cadence = 100;
    GalerkinOps ops(cfg.density.make_profile(), cfg.m);
    CHECK_THROWS_AS(run(cfg, ops, nullptr), BlowupDetected);
}

TEST_CASE("initial data builders keep the symmetry invariants") {
    GalerkinOps ops(DensityProfile::regularized(2.0, 0.25), 6);

    State tg = taylor_green_state(6, 2.0);
    CHECK(tg.v.symmetry_defect() == 0.0);
    CHECK(std::abs(tg.w.at(3, 0)) == 0.0);

    State sb = stream_bump_state(ops, 0.3, 0.2, 2);
    CHECK(sb.v.symmetry_defect() <= 1e-13);
    CHECK(sb.w.symmetry_defect() <= 1e-13);
    for (int k1 = -6; k1 <= 6; ++k1) CHECK(std::abs(sb.w.at(k1, 0)) == 0.0);

    State rnd = random_state(6, 0.25, 42);
    CHECK(rnd.v.symmetry_defect() <= 1e-13);
    const double nrm = std::sqrt(l2_norm_sq(rnd.v) + l2_norm_sq(rnd.w));
    CHECK(nrm == doctest::Approx(0.25).epsilon(1e-12));
    State rnd2 = random_state(6, 0.25, 42);
    CHECK(std::abs(rnd2.v.at(2, 3) - rnd.v.at(2, 3)) == 0.0);  // seeded determinism

    CHECK_THROWS_AS(taylor_green_state(1, 1.0), ConfigInvalid);
    CHECK_THROWS_AS(stream_bump_state(ops, 0.1, 0.2, 9), ConfigInvalid);
}

TEST_CASE("weighted energy agrees with the density-weighted integral") {
    // For rho = c constant, int rho |u|^2 = c * (||v||^2 + ||w||^2).
    GalerkinOps ops(DensityProfile::constant(0.5), 5);
    State s = taylor_green_state(5, 1.2);
    const double expect = 0.5 * (l2_norm_sq(s.v) + l2_norm_sq(s.w));
    CHECK(weighted_energy(ops, s) == doctest::Approx(expect).epsilon(1e-12));
}
