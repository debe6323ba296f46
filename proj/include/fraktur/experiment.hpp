#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraktur/config.hpp"
#include "fraktur/solver.hpp"

namespace fraktur {

/// Assembler with one material per zone (first matching zone wins, by element centroid).
Assembler make_assembler(const RunConfig& config, const TriMesh& mesh);

/// Staggered parameters with absolute tolerances and the penalty filled in.
StaggeredParams resolved_staggered(const RunConfig& config);

struct SimulationResult {
  TriMesh mesh;
  SimState state;
  std::vector<StepRecord> history;
  bool ok = true;
  std::string error;          ///< solver failure message when !ok
  std::optional<double> crack_angle;  ///< degrees, window of radius a/2 around the first notch tip
};

struct SimulateOptions {
  bool write_files = true;
  bool verbose = false;  ///< one progress line per step on stderr
};

/// Runs the load program and writes history.csv, fields_<n>.vtk, ridge.csv,
/// mesh.txt and run_report.txt into out_dir. Solver failures are caught,
/// recorded in the report and returned with ok = false; artifacts written so
/// far are kept.
SimulationResult simulate(const RunConfig& config, const std::string& out_dir, const SimulateOptions& options = {});

struct SweepEntry {
  std::string name;
  RunConfig config;
};

/// Runs independent configurations in parallel, each into out_root/<name>.
std::vector<SimulationResult> sweep(const std::vector<SweepEntry>& entries, const std::string& out_root);

}  // namespace fraktur
