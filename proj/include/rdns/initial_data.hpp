// Built-in initial-data families, compatibility norms and the effective
// velocity map.

#pragma once

#include "rdns/grid.hpp"
#include "rdns/params.hpp"
#include "rdns/state.hpp"

namespace rdns {

/// rho_c (1 + r^2)^(-sigma/2).
Field power_law_density(double rho_c, double sigma, const RadialGrid& grid);

/// amplitude exp(-((r - r_center)/width)^2) r / sqrt(r^2 + width^2), with
/// values below 1e-14 in magnitude set to zero.
Field bump_velocity(double amplitude, double r_center, double width, const RadialGrid& grid);

struct InitialDataSpec {
  double rho_c = 1.0;
  double sigma = 4.0;
  double amplitude = 0.5;
  double r_center = 2.0;
  double width = 0.5;
  /// Background rho_bar > 0 selects the strictly positive class.
  double far_field_density = 0.0;
};

/// rho = far_field_density + power_law_density, u = bump_velocity.
PrimitiveState make_initial_state(const InitialDataSpec& spec, const RadialGrid& grid);

struct CompatibilityReport {
  double g1_norm = 0.0;
  double g2_norm = 0.0;
  double gstar_norm = 0.0;
  bool g1_finite = true;
  bool g2_finite = true;
  bool gstar_finite = true;
  double tail_exponent_fit = 0.0;  ///< least-squares sigma from the outer quarter
};

/// r^(m/2)-weighted L2 norms of
///   G1 = rho^((delta-1)/2) D_r u,
///   g* = rho^(delta-1) (u_r + m u / r)_r,
///   G2 = rho^((delta-1)/2) D_r (rho^(delta-1) (u_r + m u / r)_r).
/// A norm is flagged non-finite when it is NaN/Inf or exceeds `overflow`.
CompatibilityReport check_compatibility(const Field& rho0, const Field& u0, const Params& params,
                                        const RadialGrid& grid, double overflow = 1e300);

/// v = u + 2 a1 delta/(delta - 1) (rho^(delta-1))_r; for delta = 1 the
/// logarithmic form 2 a1 (log rho)_r is used.
Field effective_velocity(const PrimitiveState& state, const Params& params,
                         const RadialGrid& grid);

}  // namespace rdns
