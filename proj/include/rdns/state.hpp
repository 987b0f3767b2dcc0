// Field containers shared by the solvers and the diagnostics.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdns/grid.hpp"

namespace rdns {

/// Density and radial velocity at nodes.
struct PrimitiveState {
  Field rho;
  Field u;
  double t = 0.0;
  double far_field_density = 0.0;  ///< 0 for vacuum far field
};

/// phi = A gamma/(gamma-1) rho^(gamma-1), u, psi = delta/(delta-1) (rho^(delta-1))_r.
struct EnlargedState {
  Field phi;
  Field u;
  Field psi;
  double t = 0.0;
};

enum class Formulation : std::uint8_t { primitive = 0, enlarged = 1 };

/// Snapshots at output times. For enlarged runs `psi` holds the evolved psi
/// of each snapshot; `states` always carries (rho, u).
struct Trajectory {
  Formulation formulation = Formulation::primitive;
  std::vector<PrimitiveState> states;
  std::vector<Field> psi;
  std::vector<double> dissipation_cum;  ///< int_0^t D ds at each snapshot
  std::vector<std::size_t> clamp_cum;   ///< clamp events up to each snapshot
  std::vector<double> constraint_residual;  ///< enlarged only
  std::size_t steps = 0;
  std::size_t clamp_events = 0;
  bool completed = true;
  std::string failure;
};

/// Numerical breakdown during time stepping (non-finite values, dt underflow,
/// loss of positivity).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rdns
