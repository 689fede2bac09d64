#include "anelastic/galerkin.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "anelastic/errors.hpp"

namespace anelastic {

namespace {
constexpr double kBlowupH1 = 1e8;
const double kPi = std::acos(-1.0);

// Scale samples row-wise by a per-z vector.
void scale_rows(Eigen::MatrixXd& samples, const Eigen::VectorXd& rho) {
    samples.array().colwise() *= rho.array();
}

int check_band(int m) {
    if (m < 1) throw ConfigInvalid("band m must be >= 1");
    return m;
}

Eigen::VectorXd sample_rho(const DensityProfile& profile, const PhysicalGrid& grid) {
    Eigen::VectorXd rho(grid.nz);
    for (int j = 0; j < grid.nz; ++j) rho[j] = profile.rho(grid.z(j));
    return rho;
}

double check_positive_min(const Eigen::VectorXd& rho) {
    const double mn = rho.minCoeff();
    if (!(mn > 0.0))
        throw ConfigInvalid("density vanishes at a grid node; use a regularized profile");
    return mn;
}
}  // namespace

GalerkinOps::GalerkinOps(const DensityProfile& profile, int m)
    : m_(check_band(m)),
      profile_(profile),
      grid_(PhysicalGrid::for_band(3 * m)),
      tf_(m, grid_),
      rho_(sample_rho(profile_, grid_)),
      rho_min_(check_positive_min(rho_)),
      mass_(rho_, m, grid_),
      psys_(rho_, m, grid_) {}

void GalerkinOps::convective(const State& s, SpectralField& nv, SpectralField& nw) const {
    const Eigen::MatrixXd V = tf_.synthesize(s.v);
    const Eigen::MatrixXd W = tf_.synthesize(s.w);
    const Eigen::MatrixXd Vx = tf_.synthesize(dx(s.v));
    const Eigen::MatrixXd Vz = tf_.synthesize(dz(s.v));
    const Eigen::MatrixXd Wx = tf_.synthesize(dx(s.w));
    const Eigen::MatrixXd Wz = tf_.synthesize(dz(s.w));
    Eigen::MatrixXd cv = V.cwiseProduct(Vx) + W.cwiseProduct(Vz);
    Eigen::MatrixXd cw = V.cwiseProduct(Wx) + W.cwiseProduct(Wz);
    scale_rows(cv, rho_);
    scale_rows(cw, rho_);
    nv = tf_.analyze(cv, Parity::Even);
    nw = tf_.analyze(cw, Parity::Odd);
}

SpectralField GalerkinOps::rho_multiply(const SpectralField& f) const {
    Eigen::MatrixXd g = tf_.synthesize(f);
    scale_rows(g, rho_);
    return tf_.analyze(g, f.parity());
}

double GalerkinOps::constraint_residual(const State& s) const {
    SpectralField r = dx(mass_.apply(s.v));
    r += dz(mass_.apply(s.w));
    return std::sqrt(l2_norm_sq(r));
}

double GalerkinOps::generalized_stiffness() const {
    double worst = 0.0;
    for (int parity = 0; parity < 2; ++parity) {
        const bool even = parity == 0;
        const Eigen::MatrixXd& g_full = mass_.gram(even ? Parity::Even : Parity::Odd);
        const int lo = even ? 0 : 1;  // odd parity: active modes k2 >= 1
        const int n = m_ + 1 - lo;
        Eigen::MatrixXd g = g_full.block(lo, lo, n, n);
        for (int k1 = 0; k1 <= m_; ++k1) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                const int k2 = i + lo;
                const double norm = (even && k2 == 0) ? 1.0 : 2.0;
                a(i, i) = double(k1) * k1 + double(k2) * k2;
                a(i, i) /= norm;
            }
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, g,
                                                                         Eigen::EigenvaluesOnly);
            worst = std::max(worst, es.eigenvalues().maxCoeff());
        }
    }
    return kPi * kPi * worst;
}

Tendency tendency(const GalerkinOps& ops, const State& s) {
    const int m = ops.m();
    Tendency t(m);
    SpectralField nv(Parity::Even, m), nw(Parity::Odd, m);
    ops.convective(s, nv, nw);

    SpectralField rhs = pressure_rhs(s.v, s.w, nv, nw);
    rhs.at(0, 0) = 0.0;  // structurally zero; pin roundoff
    t.p = ops.pressure().solve(rhs);

    t.gv = laplacian(s.v);
    t.gv -= nv;
    t.gv -= ops.rho_multiply(dx(t.p));
    t.gw = laplacian(s.w);
    t.gw -= nw;
    t.gw -= ops.rho_multiply(dz(t.p));

    t.dv = ops.mass().solve(t.gv);
    t.dw = ops.mass().solve(t.gw);
    return t;
}

namespace {
State advanced(const State& s, double a, const Tendency& k) {
    State r = s;
    r.v += a * k.dv;
    r.w += a * k.dw;
    r.t = s.t + a;
    return r;
}
}  // namespace

State rk4_step(const GalerkinOps& ops, const State& s, double dt, const Tendency* stage1) {
    Tendency k1 = stage1 ? *stage1 : tendency(ops, s);
    State s2 = advanced(s, 0.5 * dt, k1);
    Tendency k2 = tendency(ops, s2);
    State s3 = advanced(s, 0.5 * dt, k2);
    Tendency k3 = tendency(ops, s3);
    State s4 = advanced(s, dt, k3);
    Tendency k4 = tendency(ops, s4);

    State out = s;
    const double c = dt / 6.0;
    out.v += c * k1.dv;
    out.v += (2.0 * c) * k2.dv;
    out.v += (2.0 * c) * k3.dv;
    out.v += c * k4.dv;
    out.w += c * k1.dw;
    out.w += (2.0 * c) * k2.dw;
    out.w += (2.0 * c) * k3.dw;
    out.w += c * k4.dw;
    out.t = s.t + dt;
    out.v.enforce_symmetry();
    out.w.enforce_symmetry();
    return out;
}

ImexSolver::ImexSolver(const GalerkinOps& ops, double dt) : dt_(dt) {
    const int m = ops.m();
    lue_.resize(m + 1);
    luo_.resize(m + 1);
    const Eigen::MatrixXd& me = ops.mass().matrix(Parity::Even);
    const Eigen::MatrixXd& mo = ops.mass().matrix(Parity::Odd);
    for (int k1 = 0; k1 <= m; ++k1) {
        Eigen::MatrixXd ae = me, ao = mo;
        for (int k2 = 0; k2 <= m; ++k2) {
            const double lam = kPi * kPi * (double(k1) * k1 + double(k2) * k2);
            ae(k2, k2) += dt * lam;
            ao(k2, k2) += dt * lam;
        }
        ao(0, 0) += 1.0;  // inactive odd k2=0 slot; keeps the block regular
        lue_[k1].compute(ae);
        luo_[k1].compute(ao);
        if (!(std::abs(lue_[k1].determinant()) > 0.0) ||
            !(std::abs(luo_[k1].determinant()) > 0.0))
            throw SingularSystem("implicit diffusion block is singular");
    }
}

State ImexSolver::step(const GalerkinOps& ops, const State& s, const Tendency& t1) const {
    const int m = ops.m();
    // rhs = M u + dt (g - lap u); g already contains -N - P_m(rho grad p).
    SpectralField bv = ops.mass().apply(s.v);
    SpectralField bw = ops.mass().apply(s.w);
    SpectralField ev = t1.gv - laplacian(s.v);
    SpectralField ew = t1.gw - laplacian(s.w);
    bv += dt_ * ev;
    bw += dt_ * ew;

    State out(m);
    out.t = s.t + dt_;
    for (int k1 = 0; k1 <= m; ++k1) {
        for (int comp = 0; comp < 2; ++comp) {
            const SpectralField& b = comp == 0 ? bv : bw;
            SpectralField& x = comp == 0 ? out.v : out.w;
            const auto& lu = comp == 0 ? lue_[k1] : luo_[k1];
            Eigen::MatrixXd rhs(m + 1, 2);
            for (int k2 = 0; k2 <= m; ++k2) {
                rhs(k2, 0) = b.at(k1, k2).real();
                rhs(k2, 1) = b.at(k1, k2).imag();
            }
            Eigen::MatrixXd sol = lu.solve(rhs);
            for (int k2 = 0; k2 <= m; ++k2) {
                const std::complex<double> val{sol(k2, 0), sol(k2, 1)};
                x.at(k1, k2) = val;
                if (k1 > 0) x.at(-k1, k2) = std::conj(val);
            }
        }
    }
    out.v.enforce_symmetry();
    out.w.enforce_symmetry();
    return out;
}

double project_constraint(const GalerkinOps& ops, State& s) {
    SpectralField rhs = dx(ops.mass().apply(s.v));
    rhs += dz(ops.mass().apply(s.w));
    rhs.at(0, 0) = 0.0;
    SpectralField q = ops.pressure().solve(rhs);
    s.v -= dx(q);
    s.w -= dz(q);
    s.v.enforce_symmetry();
    s.w.enforce_symmetry();
    return std::sqrt(hs_norm_sq(q, 3));
}

State taylor_green_state(int m, double amplitude) {
    if (m < 2) throw ConfigInvalid("taylor_green initial data requires m >= 2");
    State s(m);
    const std::complex<double> i(0.0, 1.0);
    // v = A sin(pi x) cos(pi z), w = -A cos(pi x) sin(pi z)
    s.v.at(1, 1) = -0.5 * i * amplitude;
    s.v.at(-1, 1) = 0.5 * i * amplitude;
    s.w.at(1, 1) = -0.5 * amplitude;
    s.w.at(-1, 1) = -0.5 * amplitude;
    return s;
}

State stream_bump_state(const GalerkinOps& ops, double amplitude, double delta, int x_mode) {
    if (x_mode > ops.m())
        throw ConfigInvalid("stream_bump x_mode exceeds the band m");
    const PhysicalGrid& g = ops.grid();
    const double half = 0.5 - delta;
    auto bump = [&](double z) -> std::pair<double, double> {
        const double sarg = (z - 0.5) / half;
        if (std::abs(sarg) >= 1.0) return {0.0, 0.0};
        const double d = 1.0 - sarg * sarg;
        const double b = std::exp(1.0 - 1.0 / d);
        const double db = b * (-2.0 * sarg / (d * d)) / half;
        return {b, db};
    };
    Eigen::MatrixXd vs(g.nz, g.nx), ws(g.nz, g.nx);
    const double npi = x_mode * kPi;
    for (int j = 0; j < g.nz; ++j) {
        const auto [b, db] = bump(g.z(j));
        const double r = ops.rho()[j];
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix);
            vs(j, ix) = -amplitude * std::sin(npi * x) * db / r;
            ws(j, ix) = amplitude * npi * std::cos(npi * x) * b / r;
        }
    }
    State s(ops.m());
    s.v = ops.transform().analyze(vs, Parity::Even);
    s.w = ops.transform().analyze(ws, Parity::Odd);
    return s;
}

State random_state(int m, double amplitude, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    State s(m);
    for (int comp = 0; comp < 2; ++comp) {
        SpectralField& f = comp == 0 ? s.v : s.w;
        for (int k2 = 0; k2 <= m; ++k2)
            for (int k1 = 0; k1 <= m; ++k1) {
                const double decay =
                    1.0 / std::pow(1.0 + double(k1) * k1 + double(k2) * k2, 2.0);
                f.at(k1, k2) = {gauss(rng) * decay, gauss(rng) * decay};
            }
        f.enforce_symmetry();
    }
    const double nrm = std::sqrt(l2_norm_sq(s.v) + l2_norm_sq(s.w));
    if (nrm > 0.0) {
        s.v *= amplitude / nrm;
        s.w *= amplitude / nrm;
    }
    return s;
}

State prepare_initial(const GalerkinOps& ops, const InitialConfig& cfg, double* q_h3_out) {
    State s;
    if (cfg.type == "taylor_green") {
        s = taylor_green_state(ops.m(), cfg.amplitude);
    } else if (cfg.type == "stream_bump") {
        s = stream_bump_state(ops, cfg.amplitude, cfg.delta, cfg.x_mode);
    } else if (cfg.type == "random") {
        s = random_state(ops.m(), cfg.amplitude, cfg.seed);
    } else {
        throw ConfigInvalid("unknown initial data type: " + cfg.type);
    }
    const double q_h3 = project_constraint(ops, s);
    if (q_h3_out) *q_h3_out = q_h3;
    return s;
}

double weighted_energy(const GalerkinOps& ops, const State& s) {
    return inner_l2(ops.mass().apply(s.v), s.v) + inner_l2(ops.mass().apply(s.w), s.w);
}

double h1_norm_sq(const State& s) {
    return l2_norm_sq(s.v) + l2_norm_sq(s.w) + grad_norm_sq(s.v) + grad_norm_sq(s.w);
}

RunResult run(const RunConfig& cfg, const GalerkinOps& ops,
              const std::function<void(const Emission&)>& on_emit, bool store_snapshots) {
    const auto t_start = std::chrono::steady_clock::now();
    RunResult rr;
    rr.rho_min = ops.rho_min();
    rr.pressure_rcond = ops.pressure().rcond();
    rr.dt_bound_heuristic = cfg.rk4_dt_bound();
    rr.dt_bound_generalized = 2.8 / ops.generalized_stiffness();
    rr.dt_exceeds_generalized = cfg.scheme == "rk4" && cfg.dt > rr.dt_bound_generalized;

    State s = prepare_initial(ops, cfg.initial, &rr.q_h3);

    const long nsteps = std::llround(cfg.t_end / cfg.dt);
    std::optional<ImexSolver> imex;
    if (cfg.scheme == "imex-euler") imex.emplace(ops, cfg.dt);
    const int reproject_every =
        cfg.reproject_every > 0 ? cfg.reproject_every : (cfg.scheme == "imex-euler" ? 1 : 0);

    rr.initial_energy = weighted_energy(ops, s);
    double diss_integral = 0.0;
    double prev_rate = 0.0;

    for (long step = 0;; ++step) {
        Tendency t1 = tendency(ops, s);
        const double rate = 2.0 * (grad_norm_sq(s.v) + grad_norm_sq(s.w));
        if (step > 0) diss_integral += 0.5 * cfg.dt * (prev_rate + rate);
        prev_rate = rate;

        const double h1 = std::sqrt(h1_norm_sq(s));
        const double res = ops.constraint_residual(s);
        rr.max_constraint_residual = std::max(rr.max_constraint_residual, res);
        if (h1 > 0.0)
            rr.max_constraint_ratio = std::max(rr.max_constraint_ratio, res / h1);

        if (step % cfg.cadence == 0 || step == nsteps) {
            if (on_emit)
                on_emit(Emission{s, t1, static_cast<int>(step), rr.initial_energy,
                                 diss_integral});
            if (store_snapshots) {
                rr.snapshots.push_back(s);
                rr.snapshot_times.push_back(s.t);
            }
        }
        if (step == nsteps) {
            rr.final_energy = weighted_energy(ops, s);
            rr.steps = static_cast<int>(step);
            break;
        }

        if (cfg.scheme == "rk4") {
            s = rk4_step(ops, s, cfg.dt, &t1);
        } else {
            s = imex->step(ops, s, t1);
        }
        if (reproject_every > 0 && (step + 1) % reproject_every == 0)
            project_constraint(ops, s);

        if (std::sqrt(h1_norm_sq(s)) > kBlowupH1)
            throw BlowupDetected("||u||_H1 exceeded 1e8 at t = " + std::to_string(s.t));
    }

    rr.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rr;
}

RunResult run(const RunConfig& cfg, const std::function<void(const Emission&)>& on_emit,
              bool store_snapshots) {
    DensityProfile profile = cfg.density.make_profile();
    GalerkinOps ops(profile, cfg.m);
    return run(cfg, ops, on_emit, store_snapshots);
}

}  // namespace anelastic
