#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "anelastic/config.hpp"
#include "anelastic/density.hpp"
#include "anelastic/pressure.hpp"
#include "anelastic/spectral.hpp"
#include "anelastic/weighted.hpp"

namespace anelastic {

/// Velocity state: horizontal component v (even in z), vertical component w
/// (odd in z), both band-limited to the same m.
struct State {
    SpectralField v, w;
    double t = 0.0;

    State() : v(Parity::Even, 0), w(Parity::Odd, 0) {}
    State(int m) : v(Parity::Even, m), w(Parity::Odd, m) {}
};

/// Tendency of a state: dv/dt, dw/dt, the pressure that enforced the
/// constraint, and the pre-mass-solve right-hand sides gv, gw
/// (g = lap u - N - P_m(rho grad p), so that du/dt = M^{-1} g).
struct Tendency {
    SpectralField dv, dw, p, gv, gw;
    Tendency(int m)
        : dv(Parity::Even, m), dw(Parity::Odd, m), p(Parity::Even, m),
          gv(Parity::Even, m), gw(Parity::Odd, m) {}
};

/// Shared per-run machinery: density samples on the dealiased grid, the
/// transform pair, the mass operator, and the pressure solver.
class GalerkinOps {
  public:
    GalerkinOps(const DensityProfile& profile, int m);

    int m() const { return m_; }
    const DensityProfile& profile() const { return profile_; }
    const PhysicalGrid& grid() const { return grid_; }
    const Transform& transform() const { return tf_; }
    const MassMatrix& mass() const { return mass_; }
    const PressureSystem& pressure() const { return psys_; }
    const Eigen::VectorXd& rho() const { return rho_; }       // nz samples
    double rho_min() const { return rho_min_; }

    /// Convective term N = P_m[rho (u.grad)u] per component.
    void convective(const State& s, SpectralField& nv, SpectralField& nw) const;

    /// P_m(rho f) computed on the dealias grid (exact for band-m f).
    SpectralField rho_multiply(const SpectralField& f) const;

    /// L2 norm of the discrete constraint residual div P_m(rho u).
    double constraint_residual(const State& s) const;

    /// Largest generalized stiffness estimate max lam(Delta, M) used to
    /// report an effective explicit step bound for degenerate densities.
    double generalized_stiffness() const;

  private:
    int m_;
    DensityProfile profile_;
    PhysicalGrid grid_;
    Transform tf_;
    Eigen::VectorXd rho_;
    double rho_min_;
    MassMatrix mass_;
    PressureSystem psys_;
};

/// Full constrained tendency at a state.
Tendency tendency(const GalerkinOps& ops, const State& s);

/// Classical four-stage explicit step; stage1, when provided, must be the
/// tendency at s (lets the caller reuse an emission's tendency).
State rk4_step(const GalerkinOps& ops, const State& s, double dt,
               const Tendency* stage1 = nullptr);

/// Linearly-implicit Euler step: (M - dt lap) u^+ = M u + dt (g - lap u),
/// i.e. diffusion implicit, convection and pressure explicit.
class ImexSolver {
  public:
    ImexSolver(const GalerkinOps& ops, double dt);
    State step(const GalerkinOps& ops, const State& s, const Tendency& t1) const;
    double dt() const { return dt_; }

  private:
    double dt_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lue_, luo_;
};

/// Project a state onto the discrete constraint manifold: solve
/// L q = div P_m(rho u), subtract grad q. Returns the H^3 norm of q.
double project_constraint(const GalerkinOps& ops, State& s);

/// Initial data builders (band-m coefficients; not yet constraint-projected).
State taylor_green_state(int m, double amplitude);
State stream_bump_state(const GalerkinOps& ops, double amplitude, double delta, int x_mode);
State random_state(int m, double amplitude, uint64_t seed);

/// Build the configured initial state and apply the constraint projection.
/// Returns the corrected state; q_h3_out receives ||q||_{H^3}.
State prepare_initial(const GalerkinOps& ops, const InitialConfig& cfg, double* q_h3_out);

/// One diagnostics emission: the state, its tendency, and bookkeeping that
/// only the run loop knows (dissipation integral so far, initial energy).
struct Emission {
    const State& state;
    const Tendency& tend;
    int step;
    double initial_energy;
    double dissipation_integral;  // trapezoid of 2*||grad u||^2 over emissions
};

struct RunResult {
    int steps = 0;
    double wall_seconds = 0.0;
    double q_h3 = 0.0;                  // constraint correction of the initial data
    double initial_energy = 0.0;
    double final_energy = 0.0;
    double max_constraint_residual = 0.0;
    double max_constraint_ratio = 0.0;  // residual / ||u||_H1
    double pressure_rcond = 1.0;
    double rho_min = 0.0;
    double dt_bound_heuristic = 0.0;    // 2.8/(2 pi^2 m^2)
    double dt_bound_generalized = 0.0;  // 2.8 / max lam(Delta, M)
    bool dt_exceeds_generalized = false;
    std::vector<State> snapshots;       // states at emission times (if requested)
    std::vector<double> snapshot_times;
};

/// Integrate the configured problem. on_emit is called at t=0 and after
/// every `cadence` steps (and at the final step), with the tendency already
/// computed at that state. Throws BlowupDetected if ||u||_H1 > 1e8.
RunResult run(const RunConfig& cfg, const GalerkinOps& ops,
              const std::function<void(const Emission&)>& on_emit,
              bool store_snapshots = false);

/// Convenience: build ops from the config and run.
RunResult run(const RunConfig& cfg, const std::function<void(const Emission&)>& on_emit,
              bool store_snapshots = false);

/// Kinetic energy int rho |u|^2 via the mass operator.
double weighted_energy(const GalerkinOps& ops, const State& s);

/// H1 norm squared of the velocity pair (unweighted).
double h1_norm_sq(const State& s);

}  // namespace anelastic
