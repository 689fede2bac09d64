#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anelastic/galerkin.hpp"

namespace anelastic {

/// One diagnostics row. The first block is the primary time-series CSV; the
/// second block feeds the extended monitors CSV.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;                   // int rho |u|^2
    double dissipation = 0.0;              // 2 int |grad u|^2 (instantaneous)
    double enstrophy_h = 0.0;              // int |grad v|^2
    double constraint_residual = 0.0;      // ||div P_m(rho u)||_L2
    double energy_identity_residual = 0.0; // |E(t) - E(0) + int 2||grad u||^2|
    double ut_weighted = 0.0;              // sqrt(int rho |u_t|^2)
    double p_weighted = 0.0;               // sqrt(int rho^4 |grad p|^2)
    double dzz_weighted = 0.0;             // sqrt(int rho^2 |d_zz u|^2)
    double boundary_dzv_0 = 0.0;           // max_x |d_z v| at z=0
    double boundary_w_0 = 0.0;             // max_x |w| at z=0

    // Extended monitors.
    double boundary_dzv_1 = 0.0;           // max_x |d_z v| at z=1
    double boundary_w_1 = 0.0;             // max_x |w| at z=1
    double grad_v_sq = 0.0;                // int |grad v|^2 (= enstrophy_h)
    double grad_ut_sq = 0.0;               // int |grad u_t|^2
    double h1_sq = 0.0;                    // ||u||_{H1}^2
    double e5 = 0.0;                       // energy + int|grad u|^2 + int rho|u_t|^2
    double e6 = 0.0;                       // int rho|u|^2 + int|grad u|^2 + int rho|u_t|^2
    double qhalf_u = 0.0;                  // sqrt(int rho |u|^2) (= sqrt(energy))
};

/// Compute a full record at an emission point.
DiagnosticsRecord diagnose(const GalerkinOps& ops, const Emission& e);

/// Names of the primary CSV columns, in output order.
std::vector<std::string> diagnostics_columns();
std::vector<double> diagnostics_values(const DiagnosticsRecord& r);

/// Names/values of the extended monitor columns (prefixed by t).
std::vector<std::string> monitor_columns();
std::vector<double> monitor_values(const DiagnosticsRecord& r, double loglog_e5,
                                   double gronwall_integral);

/// Hardy-type ratio for the weight (z+eps)^k on [0,1].
///   k > -1: lhs = int (z+eps)^k f^2,        rhs = int (z+eps)^{k+2} (f^2+f'^2)
///   k < -1: lhs = int (z+eps)^k (f-f(0))^2, rhs = int (z+eps)^{k+2} f'^2
/// Throws DegenerateDenominator for |k+1| <= 1e-3 or vanishing denominator.
struct HardyResult {
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};
HardyResult hardy_check(double k, double eps, const std::function<double(double)>& f,
                        const std::function<double(double)>& df);

enum class HardyFamily { One, Z, Z2, SinHalf };
const char* hardy_family_name(HardyFamily fam);
/// Whether the branch for this k admits the family (k < -1 requires nonzero
/// derivative content; the constant family is excluded there).
bool hardy_family_applicable(HardyFamily fam, double k);
HardyResult hardy_check(HardyFamily fam, double k, double eps);

/// Residual of the vertical-velocity reconstruction identity: the odd
/// component must satisfy d_x integral relation with the horizontal flux.
/// Returns ||P_m(rho w) + dz^{-1} d_x P_m(rho v)||_L2 where dz^{-1} is the
/// exact spectral antiderivative on the sine side.
double vertical_flux_identity_residual(const GalerkinOps& ops, const State& s);

/// Weighted duality pairing of the momentum equation against the divergence-
/// free test field built from psi1 = cos(pi x): for each stored snapshot the
/// pairing P(t) is evaluated by quadrature, then integrated over time with
/// the trapezoid rule. Returns the time integral and fills the per-snapshot
/// series if requested.
double duality_pairing(const GalerkinOps& ops, const std::vector<State>& snapshots,
                       std::vector<double>* series = nullptr);

/// c_eps = int q_eps^alpha / int q_eps^{alpha+1} (exact quadrature).
double duality_normalization(const DensityProfile& profile);

/// Energy-monotonicity audit over a series of records.
struct MonotonicityReport {
    bool ok = true;
    int first_violation = -1;
    double max_violation = 0.0;  // largest positive jump E(t_{i+1}) - E(t_i)
};
MonotonicityReport check_energy_monotone(const std::vector<DiagnosticsRecord>& recs,
                                         double slack);

/// Single-mode validation flow with the closed-form decaying solution
/// (constant density): v = A e^{-2 pi^2 t} sin(pi x) cos(pi z),
/// w = -A e^{-2 pi^2 t} cos(pi x) sin(pi z). Reports the worst relative
/// L2 error over the emissions and the worst boundary trace.
struct DecayValidation {
    double max_rel_error = 0.0;
    double max_boundary_trace = 0.0;
    double initial_pressure_rel_error = 0.0;  // vs A^2/4 (cos 2pi x + cos 2pi z)
    RunResult result;
    std::vector<DiagnosticsRecord> records;
};
DecayValidation taylor_green_validation(int m, double dt, double t_end, double amplitude,
                                        int cadence = 1);

}  // namespace anelastic
