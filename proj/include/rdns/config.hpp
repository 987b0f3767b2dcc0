// Run configuration: a JSON document with the blocks params, grid,
// initial_data, solver, diagnostics, identities, checks and the top-level
// keys mode, output_dir, seed, strict. Unknown keys are rejected.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdns/grid.hpp"
#include "rdns/initial_data.hpp"
#include "rdns/params.hpp"
#include "rdns/solver_primitive.hpp"

namespace rdns {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { primitive, enlarged, both, identities, thresholds };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ParamsConfig {
  double A = 1.0;
  double gamma = 1.5;
  double delta = 0.8;
  double a1 = 1.0;
  int n = 3;
  std::optional<double> a2;  ///< set only to override the BD relation
  double tolerance = 1e-12;
};

struct GridConfig {
  double r_max = 20.0;
  std::size_t n = 1024;
  std::string stretch = "uniform";  ///< uniform | geometric
  double ratio = 1.0;
};

struct InitialDataConfig {
  std::string family = "power_law_bump";  ///< power_law_bump | power_law_rest
  InitialDataSpec spec;
};

struct DiagnosticsConfig {
  std::vector<double> p_list{2.0, 3.0};
  double ball_radius = 0.0;  ///< 0 selects R_max / 2
  double output_cadence = 0.01;
  double slack = 1.1;
};

struct IdentitiesConfig {
  std::size_t field_samples = 50;
  std::size_t mc_samples = 100000;
  std::vector<std::size_t> grid_sizes{128, 256, 512, 1024};
  double r_max = 8.0;
};

/// Which run checks decide the exit code.
struct ChecksConfig {
  bool mass = true;
  bool energy = true;
  bool positivity = true;
  bool density_bounds = false;
  bool cross_formulation = true;
  double mass_tol = 1e-8;
  double energy_tol = 1e-3;
  double cross_tol = 5e-3;
};

struct RunConfig {
  ParamsConfig params;
  GridConfig grid;
  InitialDataConfig initial_data;
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
  IdentitiesConfig identities;
  ChecksConfig checks;
  Mode mode = Mode::primitive;
  std::string output_dir;
  std::uint64_t seed = 0;
  bool strict = false;
};

/// Parses JSON text; missing keys take defaults. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Fully resolved configuration as indented JSON; parse_config inverts it.
std::string echo_config(const RunConfig& cfg);

/// Sets a numeric field addressed as "block.key" (e.g. "params.delta",
/// "grid.N"). Throws ConfigError for unknown or non-numeric fields.
void set_config_value(RunConfig& cfg, const std::string& axis, double value);

Params resolve_params(const ParamsConfig& pc);
RadialGrid resolve_grid(const GridConfig& gc);
PrimitiveState resolve_initial_state(const InitialDataConfig& ic, const RadialGrid& grid);

}  // namespace rdns
