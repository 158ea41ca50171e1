#include "dynamics.hpp"

#include <cmath>

#include "spectral.hpp"

namespace isingqoc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ControlProtocol ControlProtocol::sudden_quench(double f0, double fT, double T) {
  return {ProtocolKind::SuddenQuench, f0, fT, T, {}};
}

ControlProtocol ControlProtocol::linear_ramp(double f0, double fT, double T) {
  return {ProtocolKind::LinearRamp, f0, fT, T, {}};
}

ControlProtocol ControlProtocol::dcrab_pulse(double f0, double fT, double T,
                                             std::vector<PulseCorrection> corrections) {
  for (const auto& c : corrections) {
    if (c.basis.frequencies.size() != c.coefficients.size() ||
        c.basis.frequencies.size() != c.basis.phases.size())
      throw std::invalid_argument("pulse correction has mismatched basis/coefficient sizes");
  }
  return {ProtocolKind::DcrabPulse, f0, fT, T, std::move(corrections)};
}

double ControlProtocol::evaluate(double t) const {
  if (t < 0.0) throw std::invalid_argument("protocol evaluated at negative time");
  switch (kind) {
    case ProtocolKind::SuddenQuench:
      return t <= duration ? f_start : f_end;
    case ProtocolKind::LinearRamp:
      if (t >= duration) return f_end;
      return f_start + (f_end - f_start) * (t / duration);
    case ProtocolKind::DcrabPulse: {
      if (t >= duration) return f_end;
      double value = f_start + (f_end - f_start) * (t / duration);
      if (t == 0.0) return value;  // window is exactly zero at both ends
      const double window = std::sin(kPi * t / duration);
      double correction = 0.0;
      for (const auto& layer : corrections)
        for (size_t k = 0; k < layer.coefficients.size(); ++k)
          correction += layer.coefficients[k] *
                        std::sin(layer.basis.frequencies[k] * t + layer.basis.phases[k]);
      return value + window * correction;
    }
  }
  return f_end;  // unreachable
}

TimeGrid::TimeGrid(double duration_, int n_steps_) : duration(duration_), n_steps(n_steps_) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw config_error("time grid duration must be positive and finite");
  if (n_steps < 1) throw config_error("time grid needs at least one step");
}

TimeGrid TimeGrid::with_default_steps(double duration) {
  const int n = duration <= kPi ? 1000 : static_cast<int>(std::ceil(1000.0 * duration / kPi));
  return TimeGrid(duration, n);
}

PropagationResult propagate(const SpinChainConfig& config, const ControlProtocol& protocol,
                            const TimeGrid& grid, const Matrix& rho0,
                            const PropagationOptions& options) {
  const int dim = config.dim();
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw std::invalid_argument("initial state dimension does not match the chain");
  validate_density_matrix(rho0, 1e-10, 1e-12, 1e-10);

  const IsingOperators ops = make_ising_operators(config);
  const double dt = grid.dt();

  PropagationResult result;
  result.rho_final = rho0;
  if (options.accumulate_unitary) result.u_total = Matrix::Identity(dim, dim);

  RealMatrix h(dim, dim);
  Matrix scratch(dim, dim), rotated(dim, dim);
  Eigen::VectorXcd phases(dim);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver;

  for (int step = 0; step < grid.n_steps; ++step) {
    const double t_mid = options.t_offset + (step + 0.5) * dt;
    const double f_mid = protocol.evaluate(t_mid);
    h = -f_mid * ops.field;
    h.diagonal() += ops.coupling_diag;

    solver.compute(h);
    if (solver.info() != Eigen::Success)
      throw numeric_error("propagator eigensolve failed at t = " + std::to_string(t_mid));

    // U = V diag(e^{-i E dt}) V^T with real orthogonal V. Applying U rho U^dag
    // in the instantaneous eigenbasis needs only real-by-complex products:
    // rho <- V (phases (x) conj(phases) .* (V^T rho V)) V^T.
    const RealMatrix& v = solver.eigenvectors();
    for (int m = 0; m < dim; ++m)
      phases[m] = std::polar(1.0, -solver.eigenvalues()[m] * dt);

    scratch.noalias() = v.transpose() * result.rho_final;
    rotated.noalias() = scratch * v;
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m) rotated(m, n) *= phases[m] * std::conj(phases[n]);
    scratch.noalias() = v * rotated;
    result.rho_final.noalias() = scratch * v.transpose();

    if (options.accumulate_unitary) {
      scratch.noalias() = v.transpose() * result.u_total;
      for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) scratch(m, n) *= phases[m];
      result.u_total.noalias() = v * scratch;
    }
    if (options.sample_every > 0 &&
        ((step + 1) % options.sample_every == 0 || step + 1 == grid.n_steps)) {
      const double t = options.t_offset + (step + 1) * dt;
      result.trajectory.push_back({t, protocol.evaluate(t), result.rho_final});
    }
  }

  const double trace_drift = std::abs(result.rho_final.trace() - complexd(1.0, 0.0));
  if (trace_drift > 1e-6)
    throw numeric_error("propagation lost trace normalization (drift " +
                        std::to_string(trace_drift) + ")");
  return result;
}

ConvergenceReport convergence_check(const SpinChainConfig& config,
                                    const ControlProtocol& protocol, const Matrix& rho0,
                                    const TimeGrid& grid) {
  const Matrix coarse = propagate(config, protocol, grid, rho0).rho_final;
  const TimeGrid fine(grid.duration, 2 * grid.n_steps);
  const Matrix refined = propagate(config, protocol, fine, rho0).rho_final;
  return {grid.n_steps, fine.n_steps, (coarse - refined).cwiseAbs().maxCoeff()};
}

}  // namespace isingqoc
