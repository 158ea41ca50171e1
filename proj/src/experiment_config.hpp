#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dcrab.hpp"
#include "types.hpp"

namespace isingqoc {

/// Flat "key = value" configuration text. '#' starts a comment, blank lines
/// are skipped, later assignments to a key replace earlier ones. Insertion
/// order is kept so metadata sidecars echo the file faithfully.
struct KeyValueConfig {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  const std::string* find(const std::string& key) const;
};

KeyValueConfig parse_key_value_text(const std::string& text);
KeyValueConfig parse_key_value_file(const std::string& path);

/// Parses a double, also accepting "pi", "pi/4", "2pi", "2*pi", "pi*2" forms.
double parse_control_double(const std::string& value);

enum class ExperimentKind {
  QuenchSweep,
  RampSweep,
  OptimizeSweep,
  ConvergenceTrace,
  Transfer,
  WorkCompare,
  StepCheck,  // n_steps certification via step halving
};

const char* experiment_kind_name(ExperimentKind kind);

/// Fully resolved run parameters: config file keys merged with the CLI verb
/// and the per-experiment defaults.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::QuenchSweep;
  int n_spins = 4;
  double beta = 50.0;
  double f0_start = 0.1;
  double f0_stop = 2.0;
  double f0_step = 0.05;
  double delta_f = 0.1;
  double duration = 0.0;  // T; per-experiment default
  int n_steps = 0;        // 0: TimeGrid::with_default_steps
  DcrabParams dcrab;
  Objective objective = Objective::SIrr;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  std::string out = "-";
  std::string pulse_dir;
  std::string pulse_file;
  std::string check_protocol = "ramp";  // StepCheck: quench | ramp | pulse
  KeyValueConfig raw;

  std::vector<double> sweep_values() const;
  TimeGrid make_grid() const;
  TimeGrid make_grid(double duration_override) const;
};

/// Merges defaults, the parsed keys, and the invoking verb ("" trusts the
/// config's own experiment key). Unknown keys, malformed values, and
/// verb/experiment mismatches raise config_error.
ExperimentConfig resolve_experiment(const KeyValueConfig& kv, const std::string& verb);

/// Maps a CLI verb to its experiment kind; config_error for unknown verbs.
ExperimentKind experiment_for_verb(const std::string& verb);

}  // namespace isingqoc
