#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "control.hpp"

namespace lapbel {

// Static registry row: what an experiment kind validates and the raw-EOC
// threshold its shipped configuration must clear.
struct ExperimentInfo {
  std::string name;
  std::string validates;
  std::string norm;      // acceptance norm: l2 | h1 | linf | u | u+h1 | defect
  double threshold = 0;  // required min consecutive EOC in that norm
};

// Exactly the seven supported kinds, in the order `lapbel list` prints them.
const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo* find_experiment(const std::string& name);
std::string list_experiments();

// Parsed and default-resolved experiment configuration.  The on-disk format
// is a flat sectioned key/value file; see the README for the full reference.
struct ExperimentConfig {
  std::string kind;
  Surface surface = Surface::unit_sphere();
  int level_min = 0;
  int level_max = 0;
  std::filesystem::path output;
  std::string data_spec;    // Green kinds: data field spec
  int reference_offset = 2; // fine-mesh references sit this far above level_max
  unsigned seed = 42;
  ControlProblem problem;                    // control kinds
  SolverConfig solver{SolveMethod::Direct};  // cg is opt-in per config
  PdasConfig pdas;
};

ExperimentConfig parse_config(const std::filesystem::path& path);

struct ExperimentResult {
  std::string name;
  bool pass = false;
  double measured_min_eoc = std::numeric_limits<double>::quiet_NaN();
  double threshold = 0.0;
  std::string norm;
  std::string fail_reason; // empty when pass
  std::vector<ErrorRecord> records;
  bool reference_cache_hit = false;
  double quad_check_rel = 0.0; // degree-7 cross-check at the finest level
  std::filesystem::path csv_path, svg_path, json_path;
};

// Runs the level sweep, writes <output>/<kind>.csv/.svg/.json and returns the
// verdict.  Throws Error for config problems (errc::config_parse and friends)
// and for solver failures; a completed run that misses its threshold comes
// back with pass = false instead of throwing.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Exit classes shared by the CLI and the C API:
//   0 pass, 1 config error, 2 solver/runtime error, 3 acceptance failure.
int exit_class_for(const ExperimentResult& r);
int exit_class_for(const Error& e);

} // namespace lapbel
