#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "thermo.hpp"
#include "types.hpp"

namespace isingqoc {

/// Standard Nelder-Mead coefficients plus the termination knobs used by the
/// inner loop of each super-iteration.
struct NelderMeadParams {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.1;   // per-coordinate offset of the starting simplex
  int max_evaluations = 0;     // 0: decided by the caller (dCRAB uses 200 * N_c)
  double x_tolerance = 1e-9;   // max vertex distance from the best, inf-norm
  std::optional<double> target_cost;  // stop as soon as a vertex goes below this
};

enum class NmTermination { Tolerance, Budget, TargetReached };

struct NelderMeadResult {
  std::vector<double> x_best;
  double cost_best = 0.0;
  int n_evaluations = 0;
  NmTermination termination = NmTermination::Tolerance;
};

/// Derivative-free simplex minimization. The cost must be total on the
/// domain. Every evaluation is appended to eval_trace when given.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& cost,
                             const std::vector<double>& x0, const NelderMeadParams& params,
                             std::vector<double>* eval_trace = nullptr);

struct DcrabParams {
  int n_frequencies = 4;
  double omega_max = 0.0;  // 0: use the T * omega_max / (2 pi) = 20 convention
  double eta_error = 1e-4;
  double eta_change = 1e-4;
  int max_superiterations = 12;
  std::uint64_t seed = 1;
  NelderMeadParams simplex;
};

/// omega_max giving T * omega_max / (2 pi) = 20 (angular frequencies).
double default_omega_max(double duration);

enum class Objective { SIrr, WFric, SQvol };

Objective objective_from_name(const std::string& name);
const char* objective_name(Objective objective);

enum class StopReason { ErrorThreshold, MaxSuperiterations, ChangeThreshold };

const char* stop_reason_name(StopReason reason);

/// One cost evaluation: the optimized figure of merit plus all three
/// quantifiers of the candidate pulse.
struct TraceSample {
  int superiteration;
  double cost;
  double s_irr;
  double w_fric;
  double s_qvol;
};

struct SuperIterationRecord {
  PulseBasis basis;
  std::vector<double> coefficients;
  double best_cost;
  int n_evaluations;
};

struct OptimizationTrace {
  std::vector<TraceSample> samples;
  std::vector<SuperIterationRecord> superiterations;
  StopReason stop_reason = StopReason::MaxSuperiterations;
};

/// Frequencies uniform on [0, omega_max]; phases 0 or pi/2 with equal
/// probability. Uniform deviates are derived from raw mt19937_64 output
/// (53-bit mantissa scaling), so identical seeds give identical bases on any
/// conforming standard library.
PulseBasis draw_basis(const DcrabParams& params, double omega_max, std::mt19937_64& rng);

/// guess + sin(pi t / T) * sum_k c_k sin(w_k t + phi_k) as a new protocol.
/// The guess must be the linear ramp or a previously assembled pulse.
ControlProtocol assemble_pulse(const ControlProtocol& guess, const PulseBasis& basis,
                               const std::vector<double>& coefficients);

struct OptimizationResult {
  ControlProtocol pulse;
  IrreversibilityReport report;  // quantifiers of the returned pulse
  double best_cost = 0.0;
  OptimizationTrace trace;
};

/// dCRAB main loop: draw a random truncated basis, minimize its coefficients
/// with Nelder-Mead starting from zero, fold the optimized pulse into the
/// guess for the next super-iteration. Stops when the cost falls below
/// eta_error, the super-iteration budget runs out, or the relative
/// improvement of a super-iteration (from the second one on) drops below
/// eta_change.
OptimizationResult optimize(const SpinChainConfig& config, double f0, double fT, double T,
                            const TimeGrid& grid, const DcrabParams& params,
                            Objective objective = Objective::SIrr);

/// splitmix64 of (seed, stream): decorrelated per-point seeds for sweeps.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace isingqoc
