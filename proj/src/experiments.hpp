#pragma once

#include <string>
#include <vector>

#include "experiment_config.hpp"
#include "pulse_io.hpp"
#include "thermo.hpp"

namespace isingqoc {

/// One CSV row of a sweep-style experiment.
struct ResultRow {
  int n_spins = 0;
  double beta = 0.0;
  double f0 = 0.0;
  double fT = 0.0;
  double duration = 0.0;
  std::string protocol;  // quench | ramp | dcrab
  IrreversibilityReport report;
  long n_evaluations = 0;
  std::string stopping_reason;  // empty for fixed protocols
};

struct StepCheckRow {
  double f0 = 0.0;
  double fT = 0.0;
  double duration = 0.0;
  std::string protocol;
  ConvergenceReport report;
};

struct ExperimentResult {
  std::string csv;  // deterministic: identical config + seed => identical bytes
  std::vector<ResultRow> rows;
  std::vector<TraceSample> trace_samples;             // convergence_trace only
  std::vector<StepCheckRow> check_rows;               // step certification only
  std::vector<std::pair<double, ControlProtocol>> pulses;  // (f0, optimized pulse)
  double wall_seconds = 0.0;
};

/// Computes an experiment in memory. Sweep points are dispatched to a worker
/// pool and merged in input order, so the output does not depend on the
/// thread count. Per-point optimizer seeds are mix_seed(seed, point_index).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes the CSV (to cfg.out, or stdout for "-"), the optimized pulse files,
/// and the metadata sidecar "<out>.meta.json" (skipped for stdout).
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result);

/// run_experiment + write_experiment.
ExperimentResult run_and_write(const ExperimentConfig& cfg);

std::string format_double(double x);  // %.17g, used for every CSV number

extern const char* kSweepCsvHeader;
extern const char* kTraceCsvHeader;
extern const char* kStepCheckCsvHeader;

}  // namespace isingqoc
