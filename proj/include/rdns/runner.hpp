// Orchestration behind the command-line verbs: single runs in every mode,
// parameter sweeps over a worker pool and snapshot-directory comparison.

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rdns/config.hpp"
#include "rdns/state.hpp"

namespace rdns {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2, kExitSimulationFailed = 3 };

struct CheckOutcome {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool enabled = true;  ///< disabled checks are reported but do not set the exit code
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<CheckOutcome> checks;
  std::map<std::string, double> summary;  ///< final diagnostics, for sweep summaries
  Field final_rho;                        ///< primitive (or enlarged) final density
  std::string message;
};

/// Executes cfg.mode, writing config.echo, report.json and, for simulation
/// modes, diagnostics.csv and snapshots/ under out_dir (one subdirectory per
/// formulation in mode both).
RunOutcome run(const RunConfig& cfg, const std::string& out_dir);

/// One run per value in out_dir/run_<index>, executed by `jobs` workers
/// with seed + index; writes out_dir/sweep_summary.csv. Returns the largest
/// exit code of the runs (0 when values is empty).
int sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
          const std::string& out_dir, std::size_t jobs);

/// Observed orders log2(d_{k-1}/d_k) with d_k = |rho_k - restrict(rho_{k+1})|_2
/// for a chain of uniform grids with N doubling; entry 0 and the last entry
/// are NaN, as are entries whose neighbours are not a factor 2 apart.
std::vector<double> refinement_orders(const std::vector<Field>& finals,
                                      const std::vector<std::size_t>& sizes, double r_max);

struct CompareResult {
  std::size_t snapshots = 0;
  double rho_sup = 0.0;
  double u_sup = 0.0;
  double rho_l2 = 0.0;  ///< r^m-free radial L2 over [0, R_max] at the last snapshot
  double max_time_mismatch = 0.0;
};

/// Pairs snapshots by index. Throws std::runtime_error when the directories
/// hold different counts or grids.
CompareResult compare_dirs(const std::string& a, const std::string& b);

/// --out, else cfg.output_dir (joined to $RDNS_OUT when relative and set),
/// else $RDNS_OUT/<mode>, else ./rdns_out.
std::string resolve_output_dir(const std::string& cli_out, const RunConfig& cfg);

}  // namespace rdns
