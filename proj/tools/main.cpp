#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anelastic/config.hpp"
#include "anelastic/density.hpp"
#include "anelastic/diagnostics.hpp"
#include "anelastic/errors.hpp"
#include "anelastic/galerkin.hpp"
#include "anelastic/io.hpp"
#include "anelastic/vacuum.hpp"

namespace {

using namespace anelastic;

nlohmann::json result_json(const RunResult& rr) {
    nlohmann::json j;
    j["steps"] = rr.steps;
    j["wall_seconds"] = rr.wall_seconds;
    j["q_h3"] = rr.q_h3;
    j["initial_energy"] = rr.initial_energy;
    j["final_energy"] = rr.final_energy;
    j["max_constraint_residual"] = rr.max_constraint_residual;
    j["max_constraint_ratio"] = rr.max_constraint_ratio;
    j["pressure_rcond"] = rr.pressure_rcond;
    j["rho_min"] = rr.rho_min;
    j["dt_bound_heuristic"] = rr.dt_bound_heuristic;
    j["dt_bound_generalized"] = rr.dt_bound_generalized;
    j["dt_exceeds_generalized"] = rr.dt_exceeds_generalized;
    return j;
}

struct EmissionWriter {
    CsvWriter diag;
    CsvWriter mon;
    std::vector<DiagnosticsRecord> records;
    double gronwall = 0.0;
    double prev_core = 0.0;

    EmissionWriter(const std::string& out_dir)
        : diag(out_dir + "/diagnostics.csv", diagnostics_columns()),
          mon(out_dir + "/monitors.csv", monitor_columns()) {}

    void emit(const GalerkinOps& ops, const Emission& e) {
        DiagnosticsRecord rec = diagnose(ops, e);
        // 1 + int rho|u|^2 + ||grad u||^2, the linear-in-time monitor integrand.
        const double core = 1.0 + rec.energy + 0.5 * rec.dissipation;
        if (!records.empty())
            gronwall += 0.5 * (rec.t - records.back().t) * (prev_core + core);
        prev_core = core;
        const double loglog = std::log(1.0 + std::log(1.0 + rec.e5));
        diag.row(diagnostics_values(rec));
        mon.row(monitor_values(rec, loglog, gronwall));
        records.push_back(rec);
    }
};

int cmd_run(const std::string& config_path, const std::string& out_dir, bool seed_set,
            uint64_t seed, int cadence_override, bool dump_matrix) {
    RunConfig cfg = RunConfig::from_file(config_path);
    if (seed_set) cfg.initial.seed = seed;
    if (cadence_override > 0) cfg.cadence = cadence_override;
    cfg.validate();
    ensure_directory(out_dir);

    DensityProfile profile = cfg.density.make_profile();
    GalerkinOps ops(profile, cfg.m);
    EmissionWriter writer(out_dir);
    RunResult rr = run(cfg, ops, [&](const Emission& e) { writer.emit(ops, e); });

    nlohmann::json summary;
    summary["config"] = cfg.to_json();
    summary["result"] = result_json(rr);
    std::vector<std::string> warnings;
    if (rr.dt_exceeds_generalized)
        warnings.push_back(
            "dt exceeds the density-weighted explicit stability estimate " +
            format_double(rr.dt_bound_generalized) +
            "; the heuristic bound does not account for small densities");
    summary["warnings"] = warnings;
    const MonotonicityReport mono =
        check_energy_monotone(writer.records, 1e-12 * std::max(rr.initial_energy, 1.0));
    summary["energy_monotone"] = mono.ok;
    summary["energy_max_positive_jump"] = mono.max_violation;
    double max_eir = 0.0, max_cres = 0.0;
    for (const auto& r : writer.records) {
        max_eir = std::max(max_eir, r.energy_identity_residual);
        max_cres = std::max(max_cres, r.constraint_residual);
    }
    summary["max_energy_identity_residual"] = max_eir;
    summary["max_constraint_residual"] = max_cres;
    if (dump_matrix) {
        const Eigen::MatrixXd pm = ops.pressure().dense_matrix();
        write_matrix_binary(out_dir + "/pressure_matrix.bin", pm);
        summary["pressure_matrix"] = {{"file", "pressure_matrix.bin"},
                                      {"rows", pm.rows()},
                                      {"cols", pm.cols()},
                                      {"layout", "row-major float64 little-endian"},
                                      {"ordering",
                                       "k2 outer 0..m, k1 inner 0..m; one slot (Re) for k1=0, "
                                       "two slots (Re,Im) for k1>0; mode (0,0) omitted"}};
    }
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");

    for (const auto& wmsg : warnings) std::cerr << "warning: " << wmsg << "\n";
    std::cout << "run: " << rr.steps << " steps, energy " << format_double(rr.initial_energy)
              << " -> " << format_double(rr.final_energy)
              << ", max identity residual " << format_double(max_eir)
              << ", max constraint residual " << format_double(max_cres) << "\n"
              << "run: outputs in " << out_dir << "\n";
    return 0;
}

int cmd_taylor_green(int m, double dt, double t_end, double amplitude, double tol,
                     const std::string& out_dir) {
    DecayValidation val = taylor_green_validation(m, dt, t_end, amplitude);
    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        CsvWriter diag(out_dir + "/diagnostics.csv", diagnostics_columns());
        for (const auto& r : val.records) diag.row(diagnostics_values(r));
        nlohmann::json summary;
        summary["m"] = m;
        summary["dt"] = dt;
        summary["t_end"] = t_end;
        summary["amplitude"] = amplitude;
        summary["max_rel_error"] = val.max_rel_error;
        summary["max_boundary_trace"] = val.max_boundary_trace;
        summary["initial_pressure_rel_error"] = val.initial_pressure_rel_error;
        summary["result"] = result_json(val.result);
        write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
    }
    std::cout << "taylor-green: max_rel_error=" << format_double(val.max_rel_error)
              << " boundary_trace=" << format_double(val.max_boundary_trace)
              << " initial_pressure_rel_error="
              << format_double(val.initial_pressure_rel_error) << "\n";
    if (val.max_rel_error > tol)
        throw NumericalError("taylor-green relative error " +
                             format_double(val.max_rel_error) + " exceeds tolerance " +
                             format_double(tol));
    return 0;
}

int cmd_hardy(const std::string& out_dir) {
    ensure_directory(out_dir);
    CsvWriter csv(out_dir + "/hardy.csv", {"k", "epsilon", "family", "lhs", "rhs", "ratio"});
    const std::vector<double> ks{-1.5, -0.5, 0.0, 1.0};
    const std::vector<HardyFamily> fams{HardyFamily::One, HardyFamily::Z, HardyFamily::Z2,
                                        HardyFamily::SinHalf};
    std::vector<double> eps_list{0.0};
    for (int j = 1; j <= 8; ++j) eps_list.push_back(std::ldexp(1.0, -j));

    nlohmann::json table = nlohmann::json::array();
    double global_max = 0.0;
    for (double k : ks)
        for (HardyFamily fam : fams) {
            if (!hardy_family_applicable(fam, k)) continue;
            for (double eps : eps_list) {
                HardyResult hr = hardy_check(fam, k, eps);
                if (!std::isfinite(hr.ratio))
                    throw NumericalError("hardy ratio is not finite");
                csv.row_raw({format_double(k), format_double(eps), hardy_family_name(fam),
                             format_double(hr.lhs), format_double(hr.rhs),
                             format_double(hr.ratio)});
                nlohmann::json row;
                row["k"] = k;
                row["epsilon"] = eps;
                row["family"] = hardy_family_name(fam);
                row["lhs"] = hr.lhs;
                row["rhs"] = hr.rhs;
                row["ratio"] = hr.ratio;
                table.push_back(row);
                global_max = std::max(global_max, hr.ratio);
            }
        }
    const double anchor_z_k0 = hardy_check(HardyFamily::Z, 0.0, 0.0).ratio;
    const double anchor_z_km32 = hardy_check(HardyFamily::Z, -1.5, 0.0).ratio;
    nlohmann::json summary;
    summary["table"] = table;
    summary["max_ratio"] = global_max;
    summary["anchor_z_k0"] = anchor_z_k0;        // exact value 5/8
    summary["anchor_z_k_minus_3_2"] = anchor_z_km32;  // exact value 1
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << "hardy: " << table.size() << " rows, max ratio " << format_double(global_max)
              << ", anchors " << format_double(anchor_z_k0) << " (expect 0.625), "
              << format_double(anchor_z_km32) << " (expect 1)\n"
              << "hardy: outputs in " << out_dir << "\n";
    return 0;
}

int cmd_verify_profile(std::vector<double> eps_list, int n_grid, const std::string& out_dir) {
    if (eps_list.empty())
        for (int j = 1; j <= 8; ++j) eps_list.push_back(std::ldexp(1.0, -j));
    ensure_directory(out_dir);
    CsvWriter csv(out_dir + "/profile_properties.csv",
                  {"epsilon", "sup_deviation", "deviation_ok", "seam_jump",
                   "periodization_jump", "c3_ok", "monotone_ok", "envelope_low_defect",
                   "envelope_high_defect", "envelope_ok", "derivative_sup",
                   "derivative_sup_ok", "all_ok"});
    bool all_pass = true;
    for (double eps : eps_list) {
        QEps q = make_q_eps(eps);
        ProfileProperties p = verify_profile_properties(q, n_grid);
        csv.row({p.eps, p.sup_deviation, double(p.deviation_ok), p.seam_jump,
                 p.periodization_jump, double(p.c3_ok), double(p.monotone_ok),
                 p.envelope_low_defect, p.envelope_high_defect, double(p.envelope_ok),
                 p.derivative_sup, double(p.derivative_sup_ok), double(p.all_ok())});
        std::cout << "verify-profile: eps=" << format_double(eps)
                  << (p.all_ok() ? " OK" : " FAIL")
                  << " (sup_deviation=" << format_double(p.sup_deviation)
                  << ", derivative_sup=" << format_double(p.derivative_sup) << ")\n";
        all_pass = all_pass && p.all_ok();
    }
    std::cout << "verify-profile: outputs in " << out_dir << "\n";
    if (!all_pass) throw NumericalError("a profile property certificate failed");
    return 0;
}

int cmd_vacuum_sweep(const std::string& config_path, const std::string& out_dir) {
    SweepConfig cfg = SweepConfig::from_file(config_path);
    ensure_directory(out_dir);
    SweepResult sr = epsilon_sweep(cfg, [](const std::string& msg) {
        std::cout << msg << "\n" << std::flush;
    });

    CsvWriter bounds(out_dir + "/uniform_bounds.csv",
                     {"j", "epsilon", "sup_qhalf_u", "sup_ut_weighted", "sup_grad_ut_sq",
                      "sup_enstrophy_h", "sup_dzz_weighted", "sup_p_weighted",
                      "diss_integral", "pressure_rcond", "rho_min", "q_h3", "c_eps",
                      "duality_integral"});
    for (const auto& r : sr.runs)
        bounds.row({double(r.j), r.eps, r.sup_qhalf_u, r.sup_ut_weighted, r.sup_grad_ut_sq,
                    r.sup_enstrophy_h, r.sup_dzz_weighted, r.sup_p_weighted, r.diss_integral,
                    r.pressure_rcond, r.rho_min, r.q_h3, r.c_eps, r.duality_integral});
    CsvWriter metrics(out_dir + "/sweep_metrics.csv",
                      {"eps_hi", "eps_lo", "sup_weighted_diff", "grad_diff_integral"});
    for (const auto& p : sr.pairs)
        metrics.row({p.eps_hi, p.eps_lo, p.sup_weighted_diff, p.grad_diff_integral});

    nlohmann::json summary;
    summary["config"] = cfg.to_json();
    summary["cauchy_nonincreasing"] = sr.cauchy_nonincreasing;
    summary["warnings"] = sr.warnings;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : sr.pairs)
        pairs.push_back({{"eps_hi", p.eps_hi},
                         {"eps_lo", p.eps_lo},
                         {"sup_weighted_diff", p.sup_weighted_diff},
                         {"grad_diff_integral", p.grad_diff_integral}});
    summary["pairs"] = pairs;
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");

    for (const auto& w : sr.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& p : sr.pairs)
        std::cout << "sweep: eps " << format_double(p.eps_hi) << " vs "
                  << format_double(p.eps_lo) << ": sup weighted diff "
                  << format_double(p.sup_weighted_diff) << ", grad-diff integral "
                  << format_double(p.grad_diff_integral) << "\n";
    std::cout << "sweep: pairwise sup metric "
              << (sr.cauchy_nonincreasing ? "non-increasing" : "NOT non-increasing") << "\n"
              << "sweep: outputs in " << out_dir << "\n";
    return 0;
}

int cmd_stability_probe(const std::string& config_path, const std::string& out_dir) {
    ProbeConfig cfg = ProbeConfig::from_file(config_path);
    ensure_directory(out_dir);
    ProbeResult full = stability_probe(cfg);
    ProbeConfig half_cfg = cfg;
    half_cfg.eta = 0.5 * cfg.eta;
    ProbeResult half = stability_probe(half_cfg);

    CsvWriter csv(out_dir + "/probe.csv", {"t", "diff_sq_eta", "diff_sq_eta_half"});
    const size_t count = std::min(full.times.size(), half.times.size());
    for (size_t i = 0; i < count; ++i)
        csv.row({full.times[i], full.diff_sq_series[i], half.diff_sq_series[i]});

    const double sup_full = std::sqrt(full.sup_diff_sq);
    const double sup_half = std::sqrt(half.sup_diff_sq);
    const double halving_ratio = sup_full > 0.0 ? sup_half / sup_full : 0.0;
    nlohmann::json summary;
    summary["config"] = cfg.to_json();
    summary["eta"] = full.eta;
    summary["initial_diff_sq"] = full.initial_diff_sq;
    summary["sup_diff_sq"] = full.sup_diff_sq;
    summary["c_measured"] = full.c_measured;
    summary["envelope"] = full.envelope;
    summary["within_envelope"] = full.within_envelope;
    summary["half"] = {{"eta", half.eta},
                       {"initial_diff_sq", half.initial_diff_sq},
                       {"sup_diff_sq", half.sup_diff_sq},
                       {"within_envelope", half.within_envelope}};
    summary["halving_ratio"] = halving_ratio;
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");

    std::cout << "stability-probe: sup diff " << format_double(sup_full) << " (envelope "
              << format_double(std::sqrt(full.envelope)) << "), halving ratio "
              << format_double(halving_ratio) << " (expect about 0.5)\n"
              << "stability-probe: outputs in " << out_dir << "\n";
    if (!full.within_envelope || !half.within_envelope)
        throw NumericalError("stability probe exceeded the exponential envelope");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral simulator for anelastic channel flow with stratified density"};
    app.require_subcommand(1);

    // run
    auto* c_run = app.add_subcommand("run", "Integrate a configured problem");
    std::string run_config, run_out = "out";
    uint64_t run_seed = 0;
    bool run_seed_set = false;
    int run_cadence = 0;
    bool run_dump = false;
    c_run->add_option("--config", run_config, "JSON problem configuration")->required();
    c_run->add_option("--out", run_out, "Output directory");
    c_run->add_option("--seed", run_seed, "Override the random-initial-data seed")
        ->each([&](const std::string&) { run_seed_set = true; });
    c_run->add_option("--cadence", run_cadence, "Override the emission cadence");
    c_run->add_flag("--dump-pressure-matrix", run_dump,
                    "Also write the dense pressure operator (row-major float64)");

    // taylor-green
    auto* c_tg = app.add_subcommand("taylor-green", "Closed-form decay validation");
    int tg_m = 8;
    double tg_dt = 1e-4, tg_tend = 0.1, tg_amp = 1.0, tg_tol = 1e-6;
    std::string tg_out;
    c_tg->add_option("--m", tg_m, "Band limit");
    c_tg->add_option("--dt", tg_dt, "Time step");
    c_tg->add_option("--t-end", tg_tend, "Final time");
    c_tg->add_option("--amplitude", tg_amp, "Mode amplitude");
    c_tg->add_option("--tol", tg_tol, "Relative-error tolerance");
    c_tg->add_option("--out", tg_out, "Optional output directory");

    // vacuum-sweep
    auto* c_sweep = app.add_subcommand("vacuum-sweep",
                                       "Run the regularization sweep eps_j = 2^-j");
    std::string sweep_config, sweep_out = "out";
    c_sweep->add_option("--config", sweep_config, "JSON sweep configuration")->required();
    c_sweep->add_option("--out", sweep_out, "Output directory");

    // hardy
    auto* c_hardy = app.add_subcommand("hardy", "Weighted boundary-degenerate norm ratios");
    std::string hardy_out = "out";
    c_hardy->add_option("--out", hardy_out, "Output directory");

    // verify-profile
    auto* c_prof = app.add_subcommand("verify-profile",
                                      "Certify the regularized density profile properties");
    std::vector<double> prof_eps;
    int prof_n = 4096;
    std::string prof_out = "out";
    c_prof->add_option("--epsilon", prof_eps, "Epsilon values (default 2^-1..2^-8)");
    c_prof->add_option("--n-grid", prof_n, "Scan resolution");
    c_prof->add_option("--out", prof_out, "Output directory");

    // stability-probe
    auto* c_probe = app.add_subcommand("stability-probe",
                                       "Two-run continuous-dependence audit");
    std::string probe_config, probe_out = "out";
    c_probe->add_option("--config", probe_config, "JSON probe configuration")->required();
    c_probe->add_option("--out", probe_out, "Output directory");

    try {
        app.parse(argc, argv);
        if (c_run->parsed())
            return cmd_run(run_config, run_out, run_seed_set, run_seed, run_cadence, run_dump);
        if (c_tg->parsed())
            return cmd_taylor_green(tg_m, tg_dt, tg_tend, tg_amp, tg_tol, tg_out);
        if (c_sweep->parsed()) return cmd_vacuum_sweep(sweep_config, sweep_out);
        if (c_hardy->parsed()) return cmd_hardy(hardy_out);
        if (c_prof->parsed()) return cmd_verify_profile(prof_eps, prof_n, prof_out);
        if (c_probe->parsed()) return cmd_stability_probe(probe_config, probe_out);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigInvalid& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
