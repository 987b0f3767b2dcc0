// Method-of-lines solver for the radial (rho, u) system
//   rho_t + u rho_r + rho (u_r + m u / r) = 0
//   rho u_t + rho u u_r + A (rho^gamma)_r
//       = 2 a1 delta (rho^delta (u_r + m u / r))_r - 2 a1 m (rho^delta)_r u / r
// on the staggered grid, with a reflecting wall (u = 0, zero mass flux) at R_max.

#pragma once

#include <functional>
#include <string>

#include "rdns/grid.hpp"
#include "rdns/params.hpp"
#include "rdns/state.hpp"

namespace rdns {

enum class Scheme { explicit_rk3, imex };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverConfig {
  double dt_initial = 1e-4;  ///< cap on the first step
  double cfl_advective = 0.4;
  double stability_factor_viscous = 0.25;
  double rho_floor = 0.0;  ///< 0 disables clamping; non-positive density is then fatal
  double t_end = 0.5;
  Scheme scheme = Scheme::explicit_rk3;
  double output_cadence = 0.01;
  double dt_min = 1e-14;
  std::size_t max_steps = 100'000'000;
  /// Enlarged formulation: ceiling for h = a phi^(2 iota) on [0, guard_radius].
  double h_ceiling = 1e12;
  double guard_radius = 0.0;  ///< 0 selects R_max / 2
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const SolverConfig& cfg);

struct Tendency {
  Field drho_dt;
  Field du_dt;
};

/// Optional forcing added to the tendencies (manufactured solutions).
using PrimitiveSource = std::function<void(double t, Tendency& out)>;

/// Counts pow-argument clamps when rho_floor > 0.
struct ClampCounter {
  double floor = 0.0;
  std::size_t events = 0;
};

/// Spatial right-hand side. Throws SimulationError on non-finite values or
/// non-positive density (floor 0).
Tendency rhs_primitive(const PrimitiveState& state, const Params& params, const RadialGrid& grid,
                       ClampCounter* clamp = nullptr);

/// Largest stable step for the configured scheme. Throws SimulationError
/// when the (floored) density has a non-positive minimum.
double stable_dt(const PrimitiveState& state, const Params& params, const RadialGrid& grid,
                 const SolverConfig& cfg);

/// Advance by exactly `dt`.
PrimitiveState step(const PrimitiveState& state, const Params& params, const RadialGrid& grid,
                    const SolverConfig& cfg, double dt, ClampCounter* clamp = nullptr,
                    const PrimitiveSource& source = {});

/// Runs to cfg.t_end, storing a snapshot every cfg.output_cadence. Failures
/// end the run early with completed = false and the partial trajectory.
Trajectory simulate(const PrimitiveState& init, const Params& params, const RadialGrid& grid,
                    const SolverConfig& cfg, const PrimitiveSource& source = {});

}  // namespace rdns
