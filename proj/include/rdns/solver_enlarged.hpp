// The (phi, u, psi) formulation
//   phi_t + u phi_r + (gamma-1) phi (u_r + m u/r) = 0
//   u_t + u u_r + phi_r = 2 a1 delta h (u_r + m u/r)_r + 2 a1 psi (delta u_r + m (delta-1) u/r)
//   psi_t + u psi_r + (delta u_r + (delta-1) m u/r) psi + delta h (u_r + m u/r)_r = 0
// with h = a phi^(2 iota) = rho^(delta-1). psi is evolved, not re-derived.

#pragma once

#include <functional>

#include "rdns/grid.hpp"
#include "rdns/params.hpp"
#include "rdns/solver_primitive.hpp"
#include "rdns/state.hpp"

namespace rdns {

/// phi = A gamma/(gamma-1) rho^(gamma-1), psi = delta/(delta-1) (rho^(delta-1))_r.
EnlargedState to_enlarged(const PrimitiveState& s, const Params& p, const RadialGrid& grid);

/// rho = ((gamma-1) phi / (A gamma))^(1/(gamma-1)). Throws std::domain_error
/// for non-positive phi.
PrimitiveState from_enlarged(const EnlargedState& e, const Params& p);

/// a phi^(2 iota), evaluated as a exp(2 iota log phi).
Field enthalpy_power(const EnlargedState& e, const Params& p);

struct EnlargedTendency {
  Field dphi_dt;
  Field du_dt;
  Field dpsi_dt;
};

using EnlargedSource = std::function<void(double t, EnlargedTendency& out)>;

EnlargedTendency rhs_enlarged(const EnlargedState& e, const Params& p, const RadialGrid& grid);

/// r^(m/2)-weighted L2 norm on [0, R] of psi - a delta/(delta-1) (phi^(2 iota))_r.
double psi_constraint_residual(const EnlargedState& e, const Params& p, const RadialGrid& grid,
                               double R);

EnlargedState step_enlarged(const EnlargedState& e, const Params& p, const RadialGrid& grid,
                            const SolverConfig& cfg, double dt, const EnlargedSource& source = {});

/// Mirrors simulate(); snapshots are stored in primitive variables with the
/// evolved psi and the constraint residual alongside.
Trajectory simulate_enlarged(const EnlargedState& init, const Params& p, const RadialGrid& grid,
                             const SolverConfig& cfg, const EnlargedSource& source = {});

}  // namespace rdns
