// Conserved quantities, dissipation, effective-velocity residuals, pointwise
// density bounds and weighted L^p ledgers evaluated on states and
// trajectories of either solver.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "rdns/grid.hpp"
#include "rdns/params.hpp"
#include "rdns/state.hpp"

namespace rdns {

/// Surface area of the unit sphere in R^n: 2 pi (n = 2), 4 pi (n = 3).
double omega(int n);

/// omega_n int r^m rho dr.
double mass(const PrimitiveState& s, const RadialGrid& grid, int n);

struct Momentum {
  std::array<double, 3> vector{};  ///< identically zero by spherical symmetry
  double radial_integral = 0.0;    ///< int r^m rho u dr
};
Momentum momentum(const PrimitiveState& s, const RadialGrid& grid, int m);

struct Energy {
  double E = 0.0;          ///< int r^m (rho u^2 / 2 + A/(gamma-1) rho^gamma) dr
  double D_instant = 0.0;  ///< dissipation rate
};
Energy energy(const PrimitiveState& s, const Params& p, const RadialGrid& grid);

/// 2 a1 int r^m rho^delta (delta u_r^2 - 2(1-delta) m u_r u/r
///                         + (m - (1-delta) m^2) u^2/r^2) dr
double dissipation_rate(const PrimitiveState& s, const Params& p, const RadialGrid& grid);

/// int r^m (rho v^2 + |(rho^(delta-1/2))_r|^2 + rho^gamma) dr.
double bd_entropy(const PrimitiveState& s, const Params& p, const RadialGrid& grid);

/// (int_0^R r^m f^2 dr)^(1/2) over nodes with r <= R.
double ball_l2(const RadialGrid& grid, int m, const Field& f, double R);

/// Residual of v_t + u v_r + A gamma/(2 a1 delta) rho^(gamma-delta) (v - u)
/// with second-order snapshot time differences, restricted to [0, R].
struct ResidualSeries {
  std::vector<double> t;
  std::vector<double> norm;
  double max() const;
};
ResidualSeries v_residual(const Trajectory& traj, const Params& p, const RadialGrid& grid,
                          double R);

/// v(t) = v0 exp(-I(t)) + int_0^t K rho^(gamma-delta) u exp(-(I(t)-I(s))) ds,
/// I(t) = int_0^t K rho^(gamma-delta) ds, K = A gamma/(2 a1 delta), along a
/// sampled path, by the trapezoid rule.
std::vector<double> duhamel_v(const std::vector<double>& t, const std::vector<double>& rho_path,
                              const std::vector<double>& u_path, double v0, const Params& p);

struct CharacteristicResult {
  std::vector<double> t;
  std::vector<double> path;
  std::vector<double> v_along;
  std::vector<double> v_formula;
  double max_mismatch = 0.0;
};

/// Follows dX/dt = u(t, X) from X(0) = r0 through every `stride`-th snapshot
/// (Heun steps, 4-point spatial interpolation). Throws std::domain_error if
/// the path leaves [0, R_max].
CharacteristicResult characteristic_v(const Trajectory& traj, double r0, const Params& p,
                                      const RadialGrid& grid, std::size_t stride = 1);

/// Lower formula C^-1 rho_(r) / ((r^(1/(2-2 delta)) + 1)(rho_(r) + 1)) and
/// upper envelope min{C_up, C_tail r^-m}; constants fitted on t <= T/2,
/// checked with `slack` on t > T/2, for nodes with r <= R.
struct BoundReport {
  double C_low = 0.0;
  double C_up = 0.0;
  double C_tail = 0.0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  double worst_lower_ratio = 0.0;  ///< max over t > T/2 of lower(r) / rho
  double worst_upper_ratio = 0.0;  ///< max over t > T/2 of rho / envelope(r)
  double min_rho_ball = 0.0;       ///< over all t
  std::size_t samples_fit = 0;
  std::size_t samples_test = 0;
};

/// Running minimum of rho0 from the origin outwards.
Field running_min(const Field& rho0);

/// rho_(r) / ((r^(1/(2-2 delta)) + 1)(rho_(r) + 1)) at nodes.
Field lower_bound_profile(const Field& rho0, const Params& p, const RadialGrid& grid);

BoundReport density_bounds(const Trajectory& traj, const Field& rho0, const Params& p,
                           const RadialGrid& grid, double R, double T, double slack = 1.1);

/// Strictly positive data: one constant with C^-1 <= rho <= C, fitted on
/// t <= T/2 and checked with `slack` on t > T/2.
struct PositiveBoundReport {
  double C = 0.0;
  std::size_t violations = 0;
  double min_rho = 0.0;
  double max_rho = 0.0;
};
PositiveBoundReport positive_density_bounds(const Trajectory& traj, const RadialGrid& grid,
                                            double R, double T, double slack = 1.1);

struct LedgerEntry {
  std::string name;
  double value = 0.0;
  bool in_range = true;  ///< false when p lies outside [2, p~_m(delta))
};

/// Entries, in order: for each p: u_p<p> = |(r^m rho)^(1/p) u|_p and
/// v_p<p> = |(r^m rho)^(1/p) v|_p; for l = 2..5: ua_l<l> = |rho^((1-alpha)/l) u|_l;
/// finally du_w = |r^(m/2) rho^((delta-1)/2) D_r u|_2.
std::vector<LedgerEntry> lp_ledger(const PrimitiveState& s, const Params& p,
                                   const RadialGrid& grid, const std::vector<double>& p_list);

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double momentum_radial = 0.0;
  double energy = 0.0;
  double dissipation_cum = 0.0;
  double bd_entropy = 0.0;
  double v_inf = 0.0;
  double v_resid = 0.0;
  double rho_min = 0.0;  ///< on [0, R]
  double rho_max = 0.0;
  double lb_margin = 0.0;  ///< >= 0 when the fitted lower bound holds with slack
  double ub_tail = 0.0;    ///< max over [0, R] of rho r^m
  std::size_t clamps = 0;
  std::vector<LedgerEntry> ledger;
};

struct DiagnosticsOptions {
  double ball_radius = 0.0;  ///< 0 selects R_max / 2
  std::vector<double> p_list{2.0, 3.0};
  double slack = 1.1;
};

/// One record per snapshot. v_resid is NaN when fewer than 3 snapshots exist.
std::vector<DiagnosticsRecord> build_records(const Trajectory& traj, const Params& p,
                                             const RadialGrid& grid,
                                             const DiagnosticsOptions& opt);

/// Fixed CSV column order (ledger columns are appended by name).
std::vector<std::string> csv_columns(const std::vector<LedgerEntry>& ledger_template);

}  // namespace rdns
