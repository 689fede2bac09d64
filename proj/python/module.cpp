#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "anelastic/config.hpp"
#include "anelastic/density.hpp"
#include "anelastic/diagnostics.hpp"
#include "anelastic/errors.hpp"
#include "anelastic/galerkin.hpp"
#include "anelastic/vacuum.hpp"

namespace py = pybind11;
using namespace anelastic;

namespace {

py::dict record_dict(const DiagnosticsRecord& r) {
    py::dict d;
    const auto cols = diagnostics_columns();
    const auto vals = diagnostics_values(r);
    for (size_t i = 0; i < cols.size(); ++i) d[cols[i].c_str()] = vals[i];
    d["e5"] = r.e5;
    d["e6"] = r.e6;
    d["h1_sq"] = r.h1_sq;
    return d;
}

py::dict run_json(const std::string& config_json) {
    RunConfig cfg = RunConfig::from_json(nlohmann::json::parse(config_json));
    DensityProfile profile = cfg.density.make_profile();
    GalerkinOps ops(profile, cfg.m);
    py::list records;
    RunResult rr = run(cfg, ops, [&](const Emission& e) {
        records.append(record_dict(diagnose(ops, e)));
    });
    py::dict out;
    out["steps"] = rr.steps;
    out["q_h3"] = rr.q_h3;
    out["initial_energy"] = rr.initial_energy;
    out["final_energy"] = rr.final_energy;
    out["max_constraint_residual"] = rr.max_constraint_residual;
    out["max_constraint_ratio"] = rr.max_constraint_ratio;
    out["pressure_rcond"] = rr.pressure_rcond;
    out["rho_min"] = rr.rho_min;
    out["dt_bound_heuristic"] = rr.dt_bound_heuristic;
    out["dt_bound_generalized"] = rr.dt_bound_generalized;
    out["records"] = records;
    return out;
}

py::dict sweep_json(const std::string& config_json) {
    SweepConfig cfg = SweepConfig::from_json(nlohmann::json::parse(config_json));
    SweepResult sr = epsilon_sweep(cfg);
    py::dict out;
    py::list runs, pairs;
    for (const auto& r : sr.runs) {
        py::dict d;
        d["j"] = r.j;
        d["epsilon"] = r.eps;
        d["sup_qhalf_u"] = r.sup_qhalf_u;
        d["sup_ut_weighted"] = r.sup_ut_weighted;
        d["sup_enstrophy_h"] = r.sup_enstrophy_h;
        d["sup_dzz_weighted"] = r.sup_dzz_weighted;
        d["sup_p_weighted"] = r.sup_p_weighted;
        d["pressure_rcond"] = r.pressure_rcond;
        d["duality_integral"] = r.duality_integral;
        d["c_eps"] = r.c_eps;
        runs.append(d);
    }
    for (const auto& p : sr.pairs) {
        py::dict d;
        d["eps_hi"] = p.eps_hi;
        d["eps_lo"] = p.eps_lo;
        d["sup_weighted_diff"] = p.sup_weighted_diff;
        d["grad_diff_integral"] = p.grad_diff_integral;
        pairs.append(d);
    }
    out["runs"] = runs;
    out["pairs"] = pairs;
    out["cauchy_nonincreasing"] = sr.cauchy_nonincreasing;
    out["warnings"] = sr.warnings;
    return out;
}

py::dict probe_json(const std::string& config_json) {
    ProbeConfig cfg = ProbeConfig::from_json(nlohmann::json::parse(config_json));
    ProbeResult pr = stability_probe(cfg);
    py::dict out;
    out["eta"] = pr.eta;
    out["initial_diff_sq"] = pr.initial_diff_sq;
    out["sup_diff_sq"] = pr.sup_diff_sq;
    out["c_measured"] = pr.c_measured;
    out["envelope"] = pr.envelope;
    out["within_envelope"] = pr.within_envelope;
    out["times"] = pr.times;
    out["diff_sq_series"] = pr.diff_sq_series;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Spectral solver for anelastic channel flow with stratified density";

    py::register_exception<ConfigInvalid>(mod, "ConfigInvalid", PyExc_ValueError);
    py::register_exception<NumericalError>(mod, "NumericalError", PyExc_RuntimeError);

    py::class_<QEps>(mod, "QEps")
        .def_property_readonly("eps", &QEps::eps)
        .def_property_readonly("seam_lo", &QEps::seam_lo)
        .def_property_readonly("seam_hi", &QEps::seam_hi)
        .def("value", &QEps::value)
        .def("d1", &QEps::d1)
        .def("d2", &QEps::d2)
        .def("d3", &QEps::d3);
    mod.def("make_q_eps", &make_q_eps, py::arg("eps"));

    mod.def("verify_profile", [](double eps, int n_grid) {
        ProfileProperties p = verify_profile_properties(make_q_eps(eps), n_grid);
        py::dict d;
        d["eps"] = p.eps;
        d["sup_deviation"] = p.sup_deviation;
        d["deviation_ok"] = p.deviation_ok;
        d["seam_jump"] = p.seam_jump;
        d["c3_ok"] = p.c3_ok;
        d["monotone_ok"] = p.monotone_ok;
        d["envelope_ok"] = p.envelope_ok;
        d["derivative_sup"] = p.derivative_sup;
        d["derivative_sup_ok"] = p.derivative_sup_ok;
        d["all_ok"] = p.all_ok();
        return d;
    }, py::arg("eps"), py::arg("n_grid") = 4096);

    mod.def("mode_count", &ModeSet::count, py::arg("m"));
    mod.def("real_dimension", &ModeSet::real_dimension, py::arg("m"));

    mod.def("hardy_ratio", [](double k, double eps, const std::string& family) {
        HardyFamily fam;
        if (family == "one") fam = HardyFamily::One;
        else if (family == "z") fam = HardyFamily::Z;
        else if (family == "z_squared") fam = HardyFamily::Z2;
        else if (family == "sin_half") fam = HardyFamily::SinHalf;
        else throw ConfigInvalid("unknown hardy family: " + family);
        HardyResult hr = hardy_check(fam, k, eps);
        return py::make_tuple(hr.lhs, hr.rhs, hr.ratio);
    }, py::arg("k"), py::arg("eps"), py::arg("family"));

    mod.def("pressure_matrix", [](int m, double alpha, double eps) {
        DensityProfile profile = DensityProfile::regularized(alpha, eps);
        GalerkinOps ops(profile, m);
        return ops.pressure().dense_matrix();
    }, py::arg("m"), py::arg("alpha"), py::arg("eps"),
       "Dense pressure operator for the regularized density");

    mod.def("pressure_matrix_constant", [](int m, double value) {
        DensityProfile profile = DensityProfile::constant(value);
        GalerkinOps ops(profile, m);
        return ops.pressure().dense_matrix();
    }, py::arg("m"), py::arg("value") = 1.0,
       "Dense pressure operator for a constant density");

    mod.def("taylor_green", [](int m, double dt, double t_end, double amplitude) {
        DecayValidation v = taylor_green_validation(m, dt, t_end, amplitude);
        py::dict d;
        d["max_rel_error"] = v.max_rel_error;
        d["max_boundary_trace"] = v.max_boundary_trace;
        d["initial_pressure_rel_error"] = v.initial_pressure_rel_error;
        return d;
    }, py::arg("m") = 8, py::arg("dt") = 1e-4, py::arg("t_end") = 0.1,
       py::arg("amplitude") = 1.0);

    mod.def("run_json", &run_json, py::arg("config_json"));
    mod.def("sweep_json", &sweep_json, py::arg("config_json"));
    mod.def("probe_json", &probe_json, py::arg("config_json"));
}
