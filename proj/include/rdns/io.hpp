// Snapshot files and CSV streams.
//
// Snapshot layout (little-endian): 5 bytes "RDNS1", u32 N, f64 t, f64 R_max,
// u8 formulation (0 primitive, 1 enlarged), then f64 arrays r, rho, u and,
// for the enlarged formulation, psi.

#pragma once

#include <string>
#include <vector>

#include "rdns/diagnostics.hpp"
#include "rdns/grid.hpp"
#include "rdns/state.hpp"

namespace rdns {

struct Snapshot {
  Formulation formulation = Formulation::primitive;
  double t = 0.0;
  double r_max = 0.0;
  Field r, rho, u, psi;
};

void write_snapshot(const std::string& path, const Snapshot& s);
/// Throws std::runtime_error for a bad magic, truncated file or size mismatch.
Snapshot read_snapshot(const std::string& path);

/// Snapshot files of a run directory in time order (snap_00000.bin, ...).
std::vector<std::string> list_snapshots(const std::string& dir);

/// Writes every snapshot of the trajectory to dir/snap_<index>.bin.
void write_trajectory_snapshots(const std::string& dir, const Trajectory& traj,
                                const RadialGrid& grid);

/// Shortest exact text form (%.17g); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

/// Header from csv_columns, one row per record, '\n' line ends.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& rows);

}  // namespace rdns
