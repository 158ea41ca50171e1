#pragma once

#include <vector>

#include "spin_model.hpp"
#include "types.hpp"

namespace isingqoc {

enum class ProtocolKind { SuddenQuench, LinearRamp, DcrabPulse };

/// One truncated-basis correction layer: N_c random frequencies and phases
/// with the coefficients found for them.
struct PulseBasis {
  std::vector<double> frequencies;  // in [0, omega_max]
  std::vector<double> phases;       // each 0 or pi/2
};

struct PulseCorrection {
  PulseBasis basis;
  std::vector<double> coefficients;
};

/// Scalar control f(t) on [0, duration]. A dCRAB pulse is the linear ramp
/// between the endpoints plus windowed sine corrections accumulated over
/// super-iterations; the sin(pi t / T) window pins f(0) and f(T) exactly.
struct ControlProtocol {
  ProtocolKind kind = ProtocolKind::LinearRamp;
  double f_start = 0.0;
  double f_end = 0.0;
  double duration = 0.0;
  std::vector<PulseCorrection> corrections;  // DcrabPulse only

  static ControlProtocol sudden_quench(double f0, double fT, double T);
  static ControlProtocol linear_ramp(double f0, double fT, double T);
  static ControlProtocol dcrab_pulse(double f0, double fT, double T,
                                     std::vector<PulseCorrection> corrections);

  /// Control value at time t. Throws for t < 0; for t > duration the quench
  /// switches to f_end and the smooth protocols clamp there.
  double evaluate(double t) const;
};

/// Uniform grid for the piecewise-constant midpoint propagator.
struct TimeGrid {
  double duration;
  int n_steps;

  TimeGrid(double duration_, int n_steps_);

  /// 1000 steps up to T = pi, scaled proportionally beyond.
  static TimeGrid with_default_steps(double duration);

  double dt() const { return duration / n_steps; }
};

struct TrajectorySample {
  double t;
  double control;
  Matrix rho;
};

struct PropagationOptions {
  bool accumulate_unitary = false;
  int sample_every = 0;    // > 0: record rho every so many steps (plus the endpoint)
  double t_offset = 0.0;   // evolve over [t_offset, t_offset + grid.duration]
};

struct PropagationResult {
  Matrix rho_final;
  Matrix u_total;  // empty unless requested
  std::vector<TrajectorySample> trajectory;
};

/// Evolve rho0 over [0, duration]: per step rho <- U rho U^dag with
/// U = exp(-i H(f_mid) dt), the exponential taken exactly through the
/// eigendecomposition of H at the step-midpoint control value.
PropagationResult propagate(const SpinChainConfig& config, const ControlProtocol& protocol,
                            const TimeGrid& grid, const Matrix& rho0,
                            const PropagationOptions& options = {});

struct ConvergenceReport {
  int n_steps;
  int n_steps_doubled;
  double max_abs_difference;  // entrywise, between the two final states
};

/// Step-halving self-test: propagates on the grid and on its refinement with
/// doubled step count, reporting the largest entrywise deviation of rho(T).
ConvergenceReport convergence_check(const SpinChainConfig& config,
                                    const ControlProtocol& protocol, const Matrix& rho0,
                                    const TimeGrid& grid);

}  // namespace isingqoc
