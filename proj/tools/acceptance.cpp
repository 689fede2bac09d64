// Acceptance gate for the anelastic spectral solver.
//
// Runs every shipped configuration plus a set of standalone quantitative
// checks, and prints one PASS/FAIL line per check with the measured numbers.
// Exit status is the number of failed checks (0 = all green).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "anelastic/config.hpp"
#include "anelastic/density.hpp"
#include "anelastic/diagnostics.hpp"
#include "anelastic/errors.hpp"
#include "anelastic/galerkin.hpp"
#include "anelastic/vacuum.hpp"
#include "anelastic/weighted.hpp"

#ifndef ANELASTIC_CONFIG_DIR
#error "ANELASTIC_CONFIG_DIR must point at the shipped configuration directory"
#endif

namespace {

using namespace anelastic;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Check {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    char buf[1024];
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

/// One full integration of a run configuration with per-emission diagnostics.
struct BaseRun {
    std::string file;
    RunConfig cfg;
    RunResult result;
    std::vector<DiagnosticsRecord> records;
    double max_eir = 0.0;
};

BaseRun integrate(const std::string& file, const RunConfig& cfg, bool keep_records) {
    BaseRun br;
    br.file = file;
    br.cfg = cfg;
    GalerkinOps ops(cfg.density.make_profile(), cfg.m);
    br.result = run(cfg, ops, [&](const Emission& e) {
        DiagnosticsRecord rec = diagnose(ops, e);
        br.max_eir = std::max(br.max_eir, rec.energy_identity_residual);
        if (keep_records) br.records.push_back(rec);
    });
    return br;
}

/// The shipped *.json files that parse as plain run configurations
/// (sweep/probe configurations carry extra keys and are rejected).
std::vector<std::pair<std::string, RunConfig>> shipped_run_configs() {
    std::vector<fs::path> files;
    for (const auto& ent : fs::directory_iterator(ANELASTIC_CONFIG_DIR))
        if (ent.path().extension() == ".json") files.push_back(ent.path());
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, RunConfig>> out;
    for (const auto& p : files) {
        try {
            out.emplace_back(p.filename().string(), RunConfig::from_file(p.string()));
        } catch (const ConfigInvalid&) {
            // not a plain run configuration (sweep/probe file)
        }
    }
    return out;
}

}  // namespace

int main() {
    std::vector<Check> checks;
    const auto t_start = clock_type::now();

    // Shared base runs: every shipped run configuration is integrated once at
    // its nominal dt (used by the energy-identity, constraint, monotonicity
    // and small-data checks below).
    std::map<std::string, BaseRun> base;
    std::string base_err;
    try {
        for (const auto& [name, cfg] : shipped_run_configs())
            base.emplace(name, integrate(name, cfg, /*keep_records=*/true));
    } catch (const Error& e) {
        base_err = e.what();
    }

    // -- 1: closed-form vortex decay against the exact solution ------------
    {
        Check c{1, "analytic-vortex-decay"};
        try {
            const auto t0 = clock_type::now();
            DecayValidation dv = taylor_green_validation(8, 1e-4, 0.1, 1.0);
            const double wall = seconds_since(t0);
            c.pass = dv.max_rel_error <= 1e-6 && wall < 30.0;
            c.detail = fmt("max rel L2 error %.3e (tol 1e-06), boundary trace %.2e, %.1f s (limit 30 s)",
                           dv.max_rel_error, dv.max_boundary_trace, wall);
        } catch (const Error& e) {
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 2: discrete energy identity on every shipped configuration --------
    {
        Check c{2, "energy-identity-residual"};
        try {
            if (!base_err.empty()) throw NumericalError(base_err);
            c.pass = true;
            std::string d;
            for (auto& [name, br] : base) {
                RunConfig half = br.cfg;
                half.dt *= 0.5;
                half.cadence *= 2;  // emission times line up with the base run
                BaseRun hr = integrate(name, half, /*keep_records=*/false);
                const double e0 = br.result.initial_energy;
                const double thr = 1e-5 * e0;
                const double ratio = br.max_eir / std::max(hr.max_eir, 1e-300);
                const bool ok = br.max_eir <= thr && ratio >= 3.0;
                c.pass = c.pass && ok;
                d += fmt("%s%s: max resid %.2e (tol %.2e), dt/2 ratio %.1f (need >=3)",
                         d.empty() ? "" : "; ", name.c_str(), br.max_eir, thr, ratio);
            }
            c.detail = d;
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 3: mass-flux constraint preserved over a long explicit run --------
    {
        Check c{3, "constraint-preservation"};
        try {
            if (!base_err.empty()) throw NumericalError(base_err);
            const BaseRun& br = base.at("vacuum.json");
            const RunConfig& cfg = br.cfg;
            const bool setup_ok = cfg.m == 16 && cfg.density.kind == "regularized" &&
                                  cfg.density.alpha == 2.0 && cfg.density.epsilon == 0.125 &&
                                  cfg.scheme == "rk4" && br.result.steps == 10000;
            c.pass = setup_ok && br.result.max_constraint_ratio <= 1e-9;
            c.detail = fmt("max ||div(rho u)|| / ||u||_H1 = %.2e over %lld rk4 steps (tol 1e-09)",
                           br.result.max_constraint_ratio,
                           static_cast<long long>(br.result.steps));
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 4: initial-data constraint correction vanishes under refinement ---
    {
        Check c{4, "initial-correction-decay"};
        try {
            const auto t0 = clock_type::now();
            InitialConfig ic;
            ic.type = "stream_bump";
            ic.amplitude = 0.1;
            ic.delta = 0.2;
            ic.x_mode = 1;
            const DensityProfile rho = DensityProfile::regularized(2.0, 0.125);
            std::vector<double> qs;
            for (int m : {8, 16, 32}) {
                GalerkinOps ops(rho, m);
                double q_h3 = 0.0;
                (void)prepare_initial(ops, ic, &q_h3);
                qs.push_back(q_h3);
            }
            const double wall = seconds_since(t0);
            const double r1 = qs[1] / qs[0], r2 = qs[2] / qs[1];
            c.pass = qs[0] > qs[1] && qs[1] > qs[2] && r1 <= 0.7 && r2 <= 0.7 && wall < 60.0;
            c.detail = fmt("H3 correction %.4g -> %.4g -> %.4g at m=8,16,32 "
                           "(ratios %.3f, %.3f; need <=0.7), %.1f s (limit 60 s)",
                           qs[0], qs[1], qs[2], r1, r2, wall);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 5: pressure operator reduces to the scalar Laplacian symbol -------
    {
        Check c{5, "pressure-operator-reduction"};
        try {
            const double pi2 = M_PI * M_PI;
            double worst = 0.0;
            int worst_m = 0;
            for (int m = 1; m <= 16; ++m) {
                GalerkinOps ops(DensityProfile::constant(1.0), m);
                Eigen::MatrixXd a = ops.pressure().dense_matrix();
                const int dim = (2 * m + 1) * (m + 1) - 1;
                Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(dim, dim);
                for (int k1 = 1; k1 <= m; ++k1)  // k2 = 0 block: re/im pairs
                    for (int re = 0; re <= 1; ++re) {
                        const int i = 2 * (k1 - 1) + re;
                        expect(i, i) = -pi2 * k1 * k1;
                    }
                for (int k2 = 1; k2 <= m; ++k2) {
                    const int bse = 2 * m + (k2 - 1) * (2 * m + 1);
                    expect(bse, bse) = -pi2 * k2 * k2;  // k1 = 0 (real slot)
                    for (int k1 = 1; k1 <= m; ++k1)
                        for (int re = 0; re <= 1; ++re) {
                            const int i = bse + 1 + 2 * (k1 - 1) + re;
                            expect(i, i) = -pi2 * (k1 * k1 + k2 * k2);
                        }
                }
                const double dev = (a - expect).cwiseAbs().maxCoeff();
                if (dev > worst) {
                    worst = dev;
                    worst_m = m;
                }
            }
            c.pass = worst <= 1e-12;
            c.detail = fmt("max |A - diag(-pi^2 |k|^2)| = %.2e over m=1..16 (worst at m=%d, tol 1e-12)",
                           worst, worst_m);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 6: weighted-ratio suite: finiteness, anchors, uniformity in eps ---
    {
        Check c{6, "weighted-ratio-uniformity"};
        try {
            const double ks[] = {-1.5, -0.5, 0.0, 1.0};
            const HardyFamily fams[] = {HardyFamily::One, HardyFamily::Z, HardyFamily::Z2,
                                        HardyFamily::SinHalf};
            int n_ratios = 0, n_finite = 0, n_cells = 0, n_uniform = 0;
            double worst_var = 0.0, global_max = 0.0;
            std::string worst_cell;
            for (double k : ks)
                for (HardyFamily fam : fams) {
                    if (!hardy_family_applicable(fam, k)) continue;
                    double lo = HUGE_VAL, hi = 0.0;
                    for (int j = 1; j <= 8; ++j) {
                        const double eps = std::ldexp(1.0, -j);
                        const double r = hardy_check(fam, k, eps).ratio;
                        ++n_ratios;
                        if (std::isfinite(r)) ++n_finite;
                        lo = std::min(lo, r);
                        hi = std::max(hi, r);
                        global_max = std::max(global_max, r);
                    }
                    ++n_cells;
                    const double var = hi / lo;
                    if (var <= 2.0) ++n_uniform;
                    if (var > worst_var) {
                        worst_var = var;
                        worst_cell = fmt("k=%g/%s", k, hardy_family_name(fam));
                    }
                }
            const double a1 = hardy_check(HardyFamily::Z, 0.0, 0.0).ratio;
            const double a2 = hardy_check(HardyFamily::Z, -1.5, 0.0).ratio;
            const bool anchors_ok = std::abs(a1 - 0.625) <= 1e-8 && std::abs(a2 - 1.0) <= 1e-8;
            c.pass = n_finite == n_ratios && anchors_ok && n_uniform == n_cells;
            c.detail = fmt("%d/%d ratios finite, global max %.3f; anchors |5/8 - %.9f|, |1 - %.9f| "
                           "(tol 1e-08); per-cell eps-variation <=2.0x holds for %d/%d cells "
                           "(worst %.2fx at %s)",
                           n_finite, n_ratios, global_max, a1, a2, n_uniform, n_cells,
                           worst_var, worst_cell.c_str());
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 7: regularized-profile certificate, uniform derivative bound ------
    {
        Check c{7, "profile-certification"};
        try {
            bool props_ok = true;
            double lo = HUGE_VAL, hi = 0.0, step_max = 0.0, prev = -1.0;
            for (int j = 1; j <= 8; ++j) {
                const double eps = std::ldexp(1.0, -j);
                ProfileProperties pp = verify_profile_properties(make_q_eps(eps), 4096);
                props_ok = props_ok && pp.monotone_ok && pp.envelope_ok && pp.derivative_sup_ok;
                lo = std::min(lo, pp.derivative_sup);
                hi = std::max(hi, pp.derivative_sup);
                if (prev > 0.0) step_max = std::max(step_max, pp.derivative_sup / prev);
                prev = pp.derivative_sup;
            }
            const double var = hi / lo;
            c.pass = props_ok && var <= 1.5;
            c.detail = fmt("monotone/envelope/derivative certificates %s for eps=2^-1..2^-8; "
                           "derivative sup in [%.1f, %.1f], any-two-eps ratio %.3f (need <=1.5), "
                           "max consecutive-eps step %.3f",
                           props_ok ? "pass" : "FAIL", lo, hi, var, step_max);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 8: regularization continuation is Cauchy in the weighted norm -----
    {
        Check c{8, "regularization-cauchy"};
        try {
            const auto t0 = clock_type::now();
            SweepConfig cfg = SweepConfig::from_file(std::string(ANELASTIC_CONFIG_DIR) + "/sweep.json");
            SweepResult sr = epsilon_sweep(cfg);
            const double wall = seconds_since(t0);
            bool nonincreasing = true;
            std::string seq;
            for (size_t i = 0; i < sr.pairs.size(); ++i) {
                if (i > 0 && sr.pairs[i].sup_weighted_diff > sr.pairs[i - 1].sup_weighted_diff)
                    nonincreasing = false;
                seq += fmt("%s%.3e", i ? " -> " : "", sr.pairs[i].sup_weighted_diff);
            }
            c.pass = nonincreasing && sr.cauchy_nonincreasing && wall < 600.0;
            c.detail = fmt("pairwise sup_t weighted diff %s (non-increasing: %s), %.1f s (limit 600 s)",
                           seq.c_str(), nonincreasing ? "yes" : "NO", wall);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 9: weighted energy is non-increasing on every shipped run ---------
    {
        Check c{9, "energy-monotonicity"};
        try {
            if (!base_err.empty()) throw NumericalError(base_err);
            c.pass = true;
            std::string d;
            for (auto& [name, br] : base) {
                bool ok = true;
                double worst = 0.0;
                // Round-off slack on the non-strict branch matches the run
                // audit (fully decayed states sit at the quadrature noise
                // floor); samples with active dissipation must decay strictly.
                const double slack = 1e-12 * std::max(br.result.initial_energy, 1.0);
                for (size_t i = 0; i + 1 < br.records.size(); ++i) {
                    const double e0 = br.records[i].energy, e1 = br.records[i + 1].energy;
                    const bool strict = br.records[i].dissipation > 1e-12;
                    if (strict ? !(e1 < e0) : !(e1 <= e0 + slack)) ok = false;
                    worst = std::max(worst, e1 - e0);
                }
                c.pass = c.pass && ok;
                d += fmt("%s%s: %zu samples %s (max jump %.1e)", d.empty() ? "" : "; ",
                         name.c_str(), br.records.size(), ok ? "monotone" : "VIOLATION",
                         worst);
            }
            c.detail = d;
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 10: two-run stability bound with measured exponent -----------------
    {
        Check c{10, "perturbation-stability"};
        try {
            ProbeConfig cfg = ProbeConfig::from_file(std::string(ANELASTIC_CONFIG_DIR) + "/probe.json");
            ProbeResult p1 = stability_probe(cfg);
            ProbeConfig half = cfg;
            half.eta *= 0.5;
            ProbeResult p2 = stability_probe(half);
            const double envelope = 10.0 * std::exp(p1.c_measured) * p1.initial_diff_sq;
            const bool env_ok = p1.within_envelope && p1.sup_diff_sq <= envelope;
            const double ratio = std::sqrt(p2.sup_diff_sq / p1.sup_diff_sq);
            const bool half_ok = ratio >= 0.45 && ratio <= 0.55;
            c.pass = env_ok && half_ok;
            c.detail = fmt("sup diff^2 %.3e <= 10 e^{C} init %.3e (C=%.3f): %s; "
                           "half-perturbation sup-diff ratio %.4f (need 0.5 +/- 10%%)",
                           p1.sup_diff_sq, envelope, p1.c_measured, env_ok ? "yes" : "NO", ratio);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 11: small initial energy stays below its initial value ------------
    {
        Check c{11, "small-data-bound"};
        try {
            if (!base_err.empty()) throw NumericalError(base_err);
            const BaseRun& br = base.at("smalldata.json");
            const double e0 = br.records.front().energy;
            double emax = 0.0;
            for (const auto& r : br.records) emax = std::max(emax, r.energy);
            const bool setup_ok = br.cfg.t_end == 1.0 && br.cfg.density.kind == "regularized";
            c.pass = setup_ok && e0 <= 1e-4 && emax <= e0;
            c.detail = fmt("E(0) = %.3e (need <=1e-04), sup_t E = %.3e over %zu samples to t=1.0",
                           e0, emax, br.records.size());
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    // -- 12: weighted mass operator is SPD for every shipped profile -------
    {
        Check c{12, "mass-operator-spd"};
        try {
            struct Pair {
                DensityProfile rho;
                int m;
                bool is_const;
                std::string label;
            };
            std::vector<Pair> pairs;
            pairs.push_back({DensityProfile::constant(1.0), 8, true, "const@8"});
            for (int m : {6, 8, 16})
                pairs.push_back({DensityProfile::regularized(2.0, 0.125), m, false,
                                 fmt("reg(2,1/8)@%d", m)});
            for (int j = 2; j <= 5; ++j)
                pairs.push_back({DensityProfile::regularized(2.0, std::ldexp(1.0, -j)), 16, false,
                                 fmt("reg(2,2^-%d)@16", j)});
            c.pass = true;
            double min_eig = HUGE_VAL, worst_dev = 0.0;
            std::string worst;
            for (const auto& p : pairs) {
                GalerkinOps ops(p.rho, p.m);
                const double le = ops.mass().min_gram_eigenvalue(Parity::Even);
                const double lo = ops.mass().min_gram_eigenvalue(Parity::Odd);
                const double mn = std::min(le, lo);
                if (mn < min_eig) {
                    min_eig = mn;
                    worst = p.label;
                }
                if (mn <= 0.0) c.pass = false;
                if (p.is_const) {
                    const double dev = ops.mass().max_identity_deviation();
                    worst_dev = std::max(worst_dev, dev);
                    if (dev > 1e-12) c.pass = false;
                }
            }
            c.detail = fmt("min eigenvalue %.3e (> 0) over %zu profile/resolution pairs (smallest at %s); "
                           "constant-profile identity deviation %.2e (tol 1e-12)",
                           min_eig, pairs.size(), worst.c_str(), worst_dev);
        } catch (const Error& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        checks.push_back(c);
    }

    int failed = 0;
    for (const auto& c : checks) {
        if (!c.pass) ++failed;
        std::printf("[%2d] %s %-28s %s\n", c.id, c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    }
    std::printf("acceptance: %zu checks, %d failed, %.0f s total\n", checks.size(), failed,
                seconds_since(t_start));
    return failed;
}
