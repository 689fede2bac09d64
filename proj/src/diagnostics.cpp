#include "anelastic/diagnostics.hpp"

#include <cmath>

#include "anelastic/errors.hpp"
#include "anelastic/quadrature.hpp"

namespace anelastic {

namespace {
const double kPi = std::acos(-1.0);

// Quadrature of sum_j sum_i wz_j wx weight_j * (a_{ji}^2 [+ b_{ji}^2]) .
double weighted_grid_sq(const PhysicalGrid& g, const Eigen::VectorXd& weight,
                        const Eigen::MatrixXd& a, const Eigen::MatrixXd* b = nullptr) {
    double s = 0.0;
    for (int j = 0; j < g.nz; ++j) {
        double row = a.row(j).squaredNorm();
        if (b) row += b->row(j).squaredNorm();
        s += g.wz(j) * weight[j] * row;
    }
    return s * g.wx();
}
}  // namespace

DiagnosticsRecord diagnose(const GalerkinOps& ops, const Emission& e) {
    const State& s = e.state;
    const Tendency& td = e.tend;
    const Transform& tf = ops.transform();
    const PhysicalGrid& g = ops.grid();

    DiagnosticsRecord r;
    r.t = s.t;
    r.energy = weighted_energy(ops, s);
    r.grad_v_sq = grad_norm_sq(s.v);
    const double grad_w_sq = grad_norm_sq(s.w);
    r.enstrophy_h = r.grad_v_sq;
    r.dissipation = 2.0 * (r.grad_v_sq + grad_w_sq);
    r.constraint_residual = ops.constraint_residual(s);
    r.energy_identity_residual =
        std::abs(r.energy - e.initial_energy + e.dissipation_integral);

    const double ut_sq = inner_l2(ops.mass().apply(td.dv), td.dv) +
                         inner_l2(ops.mass().apply(td.dw), td.dw);
    r.ut_weighted = std::sqrt(std::max(0.0, ut_sq));
    r.grad_ut_sq = grad_norm_sq(td.dv) + grad_norm_sq(td.dw);

    // Weighted pressure-gradient and second-derivative norms by quadrature.
    Eigen::VectorXd rho2(g.nz), rho4(g.nz);
    for (int j = 0; j < g.nz; ++j) {
        const double q = ops.rho()[j];
        rho2[j] = q * q;
        rho4[j] = q * q * q * q;
    }
    const Eigen::MatrixXd px = tf.synthesize(dx(td.p));
    const Eigen::MatrixXd pz = tf.synthesize(dz(td.p));
    r.p_weighted = std::sqrt(weighted_grid_sq(g, rho4, px, &pz));
    const Eigen::MatrixXd vzz = tf.synthesize(dzz(s.v));
    const Eigen::MatrixXd wzz = tf.synthesize(dzz(s.w));
    r.dzz_weighted = std::sqrt(weighted_grid_sq(g, rho2, vzz, &wzz));

    r.boundary_dzv_0 = tf.synthesize_row(dz(s.v), 0.0).cwiseAbs().maxCoeff();
    r.boundary_w_0 = tf.synthesize_row(s.w, 0.0).cwiseAbs().maxCoeff();
    r.boundary_dzv_1 = tf.synthesize_row(dz(s.v), 1.0).cwiseAbs().maxCoeff();
    r.boundary_w_1 = tf.synthesize_row(s.w, 1.0).cwiseAbs().maxCoeff();

    r.h1_sq = h1_norm_sq(s);
    r.qhalf_u = std::sqrt(std::max(0.0, r.energy));
    r.e5 = r.energy + r.grad_v_sq + ut_sq;
    r.e6 = r.energy + r.grad_v_sq + grad_w_sq + ut_sq;
    return r;
}

std::vector<std::string> diagnostics_columns() {
    return {"t",
            "energy",
            "dissipation",
            "enstrophy_h",
            "constraint_residual",
            "energy_identity_residual",
            "ut_weighted",
            "p_weighted",
            "dzz_weighted",
            "boundary_dzv_0",
            "boundary_w_0"};
}

std::vector<double> diagnostics_values(const DiagnosticsRecord& r) {
    return {r.t,
            r.energy,
            r.dissipation,
            r.enstrophy_h,
            r.constraint_residual,
            r.energy_identity_residual,
            r.ut_weighted,
            r.p_weighted,
            r.dzz_weighted,
            r.boundary_dzv_0,
            r.boundary_w_0};
}

std::vector<std::string> monitor_columns() {
    return {"t",       "e5",      "loglog_e5", "gronwall_integral", "e6",
            "grad_v_sq", "grad_ut_sq", "h1_sq",  "qhalf_u",          "boundary_dzv_1",
            "boundary_w_1"};
}

std::vector<double> monitor_values(const DiagnosticsRecord& r, double loglog_e5,
                                   double gronwall_integral) {
    return {r.t,       r.e5,      loglog_e5, gronwall_integral, r.e6,
            r.grad_v_sq, r.grad_ut_sq, r.h1_sq,  r.qhalf_u,        r.boundary_dzv_1,
            r.boundary_w_1};
}

// ------------------------------------------------------------------ hardy

HardyResult hardy_check(double k, double eps, const std::function<double(double)>& f,
                        const std::function<double(double)>& df) {
    if (std::abs(k + 1.0) <= 1e-3)
        throw DegenerateDenominator("hardy_check: k within 1e-3 of the critical exponent -1");
    if (eps < 0.0) throw ConfigInvalid("hardy_check: eps must be >= 0");

    HardyResult out;
    const double h = std::ldexp(1.0, -20);
    if (k > -1.0) {
        auto g_num = [&](double z) { return f(z) * f(z); };
        auto g_den = [&](double z) {
            const double fv = f(z), dv = df(z);
            return fv * fv + dv * dv;
        };
        const double gn0 = g_num(0.0);
        const double gn1 = (g_num(h) - gn0) / h;
        const double gd0 = g_den(0.0);
        const double gd1 = (g_den(h) - gd0) / h;
        out.lhs = integrate_singular(k, eps, g_num, gn0, gn1);
        out.rhs = integrate_singular(k + 2.0, eps, g_den, gd0, gd1);
    } else {
        const double f0 = f(0.0);
        auto g_num = [&](double z) {
            const double d = f(z) - f0;
            return d * d;
        };
        auto g_den = [&](double z) {
            const double dv = df(z);
            return dv * dv;
        };
        const double gd0 = g_den(0.0);
        const double gd1 = (g_den(h) - gd0) / h;
        out.lhs = integrate_singular(k, eps, g_num, 0.0, 0.0);
        out.rhs = integrate_singular(k + 2.0, eps, g_den, gd0, gd1);
    }
    if (out.rhs <= 1e-14) {
        // A vanishing denominator with vanishing numerator certifies the
        // inequality trivially (f = 0); otherwise the instance is degenerate.
        if (out.lhs <= 1e-14) {
            out.ratio = 0.0;
            return out;
        }
        throw DegenerateDenominator("hardy_check: denominator integral vanishes");
    }
    out.ratio = out.lhs / out.rhs;
    return out;
}

const char* hardy_family_name(HardyFamily fam) {
    switch (fam) {
        case HardyFamily::One: return "one";
        case HardyFamily::Z: return "z";
        case HardyFamily::Z2: return "z_squared";
        case HardyFamily::SinHalf: return "sin_half";
    }
    return "?";
}

bool hardy_family_applicable(HardyFamily fam, double k) {
    if (k < -1.0) return fam != HardyFamily::One;
    return true;
}

HardyResult hardy_check(HardyFamily fam, double k, double eps) {
    switch (fam) {
        case HardyFamily::One:
            return hardy_check(k, eps, [](double) { return 1.0; }, [](double) { return 0.0; });
        case HardyFamily::Z:
            return hardy_check(k, eps, [](double z) { return z; }, [](double) { return 1.0; });
        case HardyFamily::Z2:
            return hardy_check(k, eps, [](double z) { return z * z; },
                               [](double z) { return 2.0 * z; });
        case HardyFamily::SinHalf:
            return hardy_check(k, eps, [](double z) { return std::sin(0.5 * kPi * z); },
                               [](double z) { return 0.5 * kPi * std::cos(0.5 * kPi * z); });
    }
    throw Error("hardy_check: unknown family");
}

// ------------------------------------------------- vertical flux identity

double vertical_flux_identity_residual(const GalerkinOps& ops, const State& s) {
    const int m = ops.m();
    SpectralField mv = ops.mass().apply(s.v);
    SpectralField mw = ops.mass().apply(s.w);
    SpectralField b = dx(mv);  // even field; row k2 of dz(mw) equals pi k2 (mw)_k2

    SpectralField diff(Parity::Odd, m);
    for (int k1 = -m; k1 <= m; ++k1)
        for (int k2 = 1; k2 <= m; ++k2)
            diff.at(k1, k2) = mw.at(k1, k2) + b.at(k1, k2) / (kPi * k2);
    double extra = 0.0;  // k2=0 content of the horizontal flux divergence
    for (int k1 = -m; k1 <= m; ++k1) extra += 2.0 * std::norm(b.at(k1, 0));
    return std::sqrt(l2_norm_sq(diff) + extra);
}

// ------------------------------------------------------------- duality

double duality_normalization(const DensityProfile& profile) {
    const QEps* q = profile.q();
    if (!q) throw Error("duality_normalization requires a regularized density profile");
    const double alpha = profile.alpha();
    std::vector<double> seams{q->seam_lo(), q->seam_hi()};
    auto qa = [&](double z) { return std::pow(q->value(z), alpha); };
    auto qa1 = [&](double z) { return std::pow(q->value(z), alpha + 1.0); };
    const double num = integrate_piecewise(qa, 0.0, 1.0, seams, 64, 16);
    const double den = integrate_piecewise(qa1, 0.0, 1.0, seams, 64, 16);
    return num / den;
}

double duality_pairing(const GalerkinOps& ops, const std::vector<State>& snapshots,
                       std::vector<double>* series) {
    const DensityProfile& profile = ops.profile();
    const QEps* qe = profile.q();
    if (!qe) throw Error("duality_pairing requires a regularized density profile");
    if (snapshots.size() < 2) throw Error("duality_pairing requires at least two snapshots");

    const double alpha = profile.alpha();
    const PhysicalGrid& g = ops.grid();
    const Transform& tf = ops.transform();
    const double c = duality_normalization(profile);

    // Cumulative integrals A = int_0^z q^alpha, B = int_0^z q^{alpha+1}.
    std::vector<double> seams{qe->seam_lo(), qe->seam_hi()};
    Eigen::VectorXd A(g.nz), B(g.nz);
    A[0] = 0.0;
    B[0] = 0.0;
    for (int j = 1; j < g.nz; ++j) {
        auto qa = [&](double z) { return std::pow(qe->value(z), alpha); };
        auto qa1 = [&](double z) { return std::pow(qe->value(z), alpha + 1.0); };
        A[j] = A[j - 1] + integrate_piecewise(qa, g.z(j - 1), g.z(j), seams, 32, 2);
        B[j] = B[j - 1] + integrate_piecewise(qa1, g.z(j - 1), g.z(j), seams, 32, 2);
    }

    // Vertical profiles of the test field and its derivatives.
    Eigen::VectorXd psih_z(g.nz), dzpsih_z(g.nz), r_z(g.nz), dr_z(g.nz), rho_psiv_z(g.nz);
    for (int j = 0; j < g.nz; ++j) {
        const double z = g.z(j);
        const double q = qe->value(z), dq = qe->d1(z);
        const double qma = std::pow(q, -alpha);
        psih_z[j] = 1.0 - c * q;
        dzpsih_z[j] = -c * dq;
        const double core = A[j] - c * B[j];
        r_z[j] = qma * core;
        dr_z[j] = (1.0 - c * q) - alpha * dq * qma / q * core;
        rho_psiv_z[j] = core;  // rho * r: the q^alpha factors cancel exactly
    }

    std::vector<double> pt(snapshots.size());
    for (size_t n = 0; n < snapshots.size(); ++n) {
        const State& s = snapshots[n];
        Tendency td = tendency(ops, s);
        const Eigen::MatrixXd V = tf.synthesize(s.v);
        const Eigen::MatrixXd W = tf.synthesize(s.w);
        const Eigen::MatrixXd Vx = tf.synthesize(dx(s.v));
        const Eigen::MatrixXd Vz = tf.synthesize(dz(s.v));
        const Eigen::MatrixXd Wx = tf.synthesize(dx(s.w));
        const Eigen::MatrixXd Wz = tf.synthesize(dz(s.w));
        const Eigen::MatrixXd Ut = tf.synthesize(td.dv);
        const Eigen::MatrixXd Wt = tf.synthesize(td.dw);

        double acc = 0.0;
        for (int j = 0; j < g.nz; ++j) {
            const double rho = ops.rho()[j];
            const double wzj = g.wz(j);
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.x(i);
                const double cx = std::cos(kPi * x), sx = std::sin(kPi * x);
                const double psih = psih_z[j] * cx;
                const double dxpsih = -kPi * sx * psih_z[j];
                const double dzpsih = dzpsih_z[j] * cx;
                const double rho_psiv = kPi * sx * rho_psiv_z[j];
                const double dxpsiv = kPi * kPi * cx * r_z[j];
                const double dzpsiv = kPi * sx * dr_z[j];

                const double conv_h = V(j, i) * Vx(j, i) + W(j, i) * Vz(j, i);
                const double conv_v = V(j, i) * Wx(j, i) + W(j, i) * Wz(j, i);
                double val = rho * Ut(j, i) * psih + Wt(j, i) * rho_psiv;
                val += rho * conv_h * psih + conv_v * rho_psiv;
                val += Vx(j, i) * dxpsih + Vz(j, i) * dzpsih;
                val += Wx(j, i) * dxpsiv + Wz(j, i) * dzpsiv;
                acc += wzj * val;
            }
        }
        pt[n] = acc * g.wx();
    }
    if (series) *series = pt;

    double integral = 0.0;
    for (size_t n = 0; n + 1 < snapshots.size(); ++n) {
        const double dt = snapshots[n + 1].t - snapshots[n].t;
        integral += 0.5 * dt * (pt[n] + pt[n + 1]);
    }
    return integral;
}

// ----------------------------------------------------------- decay check

DecayValidation taylor_green_validation(int m, double dt, double t_end, double amplitude,
                                        int cadence) {
    RunConfig cfg;
    cfg.m = m;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.scheme = "rk4";
    cfg.cadence = cadence;
    cfg.density.kind = "constant";
    cfg.density.constant_value = 1.0;
    cfg.initial.type = "taylor_green";
    cfg.initial.amplitude = amplitude;
    cfg.validate();

    DensityProfile profile = cfg.density.make_profile();
    GalerkinOps ops(profile, m);

    DecayValidation val;
    const State exact0 = taylor_green_state(m, amplitude);
    const double ref0 = std::sqrt(l2_norm_sq(exact0.v) + l2_norm_sq(exact0.w));
    bool first = true;
    val.result = run(cfg, ops, [&](const Emission& e) {
        val.records.push_back(diagnose(ops, e));
        const double decay = std::exp(-2.0 * kPi * kPi * e.state.t);
        SpectralField ev = e.state.v - decay * exact0.v;
        SpectralField ew = e.state.w - decay * exact0.w;
        const double err = std::sqrt(l2_norm_sq(ev) + l2_norm_sq(ew));
        val.max_rel_error = std::max(val.max_rel_error, err / (decay * ref0));
        const DiagnosticsRecord& r = val.records.back();
        val.max_boundary_trace =
            std::max({val.max_boundary_trace, r.boundary_w_0, r.boundary_w_1});
        if (first) {
            first = false;
            // The pressure balancing the initial convection has the closed
            // form +A^2/4 (cos 2 pi x + cos 2 pi z).
            SpectralField pex(Parity::Even, m);
            pex.at(2, 0) = amplitude * amplitude / 8.0;
            pex.at(-2, 0) = amplitude * amplitude / 8.0;
            pex.at(0, 2) = amplitude * amplitude / 4.0;
            SpectralField dp = e.tend.p - pex;
            val.initial_pressure_rel_error =
                std::sqrt(l2_norm_sq(dp) / l2_norm_sq(pex));
        }
    });
    return val;
}

// ------------------------------------------------------------ monotonicity

MonotonicityReport check_energy_monotone(const std::vector<DiagnosticsRecord>& recs,
                                         double slack) {
    MonotonicityReport rep;
    for (size_t i = 0; i + 1 < recs.size(); ++i) {
        const double jump = recs[i + 1].energy - recs[i].energy;
        if (jump > rep.max_violation) rep.max_violation = jump;
        if (jump > slack && rep.ok) {
            rep.ok = false;
            rep.first_violation = static_cast<int>(i + 1);
        }
    }
    return rep;
}

}  // namespace anelastic
