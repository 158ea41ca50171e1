#include "dcrab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isingqoc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPow53 = 9007199254740992.0;

// Uniform double in [0, 1) from the generator's raw 64-bit output. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
double uniform53(std::mt19937_64& rng) { return (rng() >> 11) * (1.0 / kTwoPow53); }

// Tr[A * B] without forming the product; for Hermitian A this is real up to
// rounding, and the hot loop below only needs the real part.
double trace_product_real(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& cost,
                             const std::vector<double>& x0, const NelderMeadParams& params,
                             std::vector<double>* eval_trace) {
  const int dim = static_cast<int>(x0.size());
  if (dim < 1) throw std::invalid_argument("nelder_mead needs at least one dimension");
  const int budget = params.max_evaluations > 0 ? params.max_evaluations : 200 * dim;

  NelderMeadResult result;
  result.cost_best = std::numeric_limits<double>::infinity();
  bool target_hit = false;

  auto evaluate = [&](const std::vector<double>& x) {
    const double fx = cost(x);
    ++result.n_evaluations;
    if (eval_trace) eval_trace->push_back(fx);
    if (fx < result.cost_best) {
      result.cost_best = fx;
      result.x_best = x;
    }
    if (params.target_cost && fx < *params.target_cost) target_hit = true;
    return fx;
  };
  auto out_of_budget = [&] { return result.n_evaluations >= budget; };

  std::vector<std::vector<double>> vertices(dim + 1, x0);
  std::vector<double> costs(dim + 1);
  for (int i = 0; i <= dim; ++i) {
    if (i > 0) vertices[i][i - 1] += params.initial_step;
    costs[i] = evaluate(vertices[i]);
    if (target_hit || out_of_budget()) break;
  }

  while (!target_hit && !out_of_budget()) {
    std::vector<int> order(dim + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return costs[a] < costs[b]; });
    const int best = order[0];
    const int worst = order[dim];
    const int second_worst = order[dim - 1];

    double diameter = 0.0;
    for (int i = 0; i <= dim; ++i)
      for (int d = 0; d < dim; ++d)
        diameter = std::max(diameter, std::abs(vertices[i][d] - vertices[best][d]));
    if (diameter < params.x_tolerance) break;

    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < dim; ++d) centroid[d] += vertices[i][d] / dim;
    }

    auto along = [&](double scale) {
      std::vector<double> x(dim);
      for (int d = 0; d < dim; ++d)
        x[d] = centroid[d] + scale * (centroid[d] - vertices[worst][d]);
      return x;
    };

    const std::vector<double> reflected = along(params.reflection);
    const double f_reflected = evaluate(reflected);
    if (target_hit || out_of_budget()) break;

    if (f_reflected < costs[best]) {
      const std::vector<double> expanded = along(params.reflection * params.expansion);
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        vertices[worst] = expanded;
        costs[worst] = f_expanded;
      } else {
        vertices[worst] = reflected;
        costs[worst] = f_reflected;
      }
    } else if (f_reflected < costs[second_worst]) {
      vertices[worst] = reflected;
      costs[worst] = f_reflected;
    } else {
      bool shrink = false;
      if (f_reflected < costs[worst]) {
        const std::vector<double> contracted = along(params.reflection * params.contraction);
        const double f_contracted = evaluate(contracted);
        if (f_contracted <= f_reflected) {
          vertices[worst] = contracted;
          costs[worst] = f_contracted;
        } else {
          shrink = true;
        }
      } else {
        const std::vector<double> contracted = along(-params.contraction);
        const double f_contracted = evaluate(contracted);
        if (f_contracted < costs[worst]) {
          vertices[worst] = contracted;
          costs[worst] = f_contracted;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (int i = 0; i <= dim && !target_hit && !out_of_budget(); ++i) {
          if (i == best) continue;
          for (int d = 0; d < dim; ++d)
            vertices[i][d] = vertices[best][d] + params.shrink * (vertices[i][d] - vertices[best][d]);
          costs[i] = evaluate(vertices[i]);
        }
      }
    }
  }

  result.termination = target_hit          ? NmTermination::TargetReached
                       : out_of_budget()   ? NmTermination::Budget
                                           : NmTermination::Tolerance;
  return result;
}

double default_omega_max(double duration) { return 2.0 * kPi * 20.0 / duration; }

Objective objective_from_name(const std::string& name) {
  if (name == "s_irr") return Objective::SIrr;
  if (name == "w_fric") return Objective::WFric;
  if (name == "s_qvol") return Objective::SQvol;
  throw config_error("unknown objective '" + name + "' (expected s_irr, w_fric or s_qvol)");
}

const char* objective_name(Objective objective) {
  switch (objective) {
    case Objective::SIrr: return "s_irr";
    case Objective::WFric: return "w_fric";
    case Objective::SQvol: return "s_qvol";
  }
  return "s_irr";
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::ErrorThreshold: return "error_threshold";
    case StopReason::MaxSuperiterations: return "max_superiterations";
    case StopReason::ChangeThreshold: return "change_threshold";
  }
  return "max_superiterations";
}

PulseBasis draw_basis(const DcrabParams& params, double omega_max, std::mt19937_64& rng) {
  if (params.n_frequencies < 1) throw config_error("dCRAB needs at least one frequency");
  if (!(omega_max > 0.0)) throw config_error("omega_max must be positive");
  PulseBasis basis;
  basis.frequencies.resize(params.n_frequencies);
  basis.phases.resize(params.n_frequencies);
  for (int k = 0; k < params.n_frequencies; ++k) {
    basis.frequencies[k] = uniform53(rng) * omega_max;
    basis.phases[k] = (rng() >> 63) ? kPi / 2.0 : 0.0;
  }
  return basis;
}

ControlProtocol assemble_pulse(const ControlProtocol& guess, const PulseBasis& basis,
                               const std::vector<double>& coefficients) {
  if (coefficients.size() != basis.frequencies.size())
    throw std::invalid_argument("assemble_pulse: coefficient count does not match the basis");
  if (guess.kind == ProtocolKind::SuddenQuench)
    throw std::invalid_argument("assemble_pulse: a quench cannot serve as the dCRAB guess");
  std::vector<PulseCorrection> corrections = guess.corrections;
  corrections.push_back({basis, coefficients});
  return ControlProtocol::dcrab_pulse(guess.f_start, guess.f_end, guess.duration,
                                      std::move(corrections));
}

OptimizationResult optimize(const SpinChainConfig& config, double f0, double fT, double T,
                            const TimeGrid& grid, const DcrabParams& params,
                            Objective objective) {
  if (!(config.beta > 0.0))
    throw config_error("optimization objectives require beta > 0");
  const double omega_max = params.omega_max > 0.0 ? params.omega_max : default_omega_max(T);

  // Run-constant spectral data; each cost evaluation only re-propagates.
  const IsingOperators ops = make_ising_operators(config);
  const SpectralDecomposition spec0 = eigendecompose(hamiltonian_real(ops, f0));
  const SpectralDecomposition specT = eigendecompose(hamiltonian_real(ops, fT));
  const Matrix rho0 = gibbs_state(spec0, config.beta);
  const RealVector p0 = gibbs_populations(spec0, config.beta);
  const double delta_F = free_energy_difference(spec0, specT, config.beta);
  const Matrix hT = hamiltonian_real(ops, fT).cast<complexd>();
  const double energy0 = trace_product_real(hamiltonian_real(ops, f0).cast<complexd>(), rho0);
  const double adiabatic_energy = specT.eigenvalues.dot(p0);
  const Matrix s_op_T = volume_entropy_operator(specT);
  const double s_qvol_0 = trace_product_real(volume_entropy_operator(spec0), rho0);

  OptimizationResult result;
  double best_cost = std::numeric_limits<double>::infinity();
  int current_super = 0;

  auto evaluate = [&](const ControlProtocol& pulse) {
    const Matrix rhoT = pulse.kind == ProtocolKind::LinearRamp && pulse.f_start == pulse.f_end
                            ? rho0
                            : propagate(config, pulse, grid, rho0).rho_final;
    IrreversibilityReport report;
    const double energy_T = trace_product_real(hT, rhoT);
    report.avg_work = energy_T - energy0;
    report.delta_F = delta_F;
    report.s_irr = config.beta * (report.avg_work - delta_F);
    report.w_fric = energy_T - adiabatic_energy;
    report.s_qvol = trace_product_real(s_op_T, rhoT) - s_qvol_0;

    double cost = report.s_irr;
    if (objective == Objective::WFric) cost = report.w_fric;
    if (objective == Objective::SQvol) cost = report.s_qvol;
    result.trace.samples.push_back({current_super, cost, report.s_irr, report.w_fric,
                                    report.s_qvol});
    if (cost < best_cost) {
      best_cost = cost;
      result.pulse = pulse;
      result.report = report;
    }
    return cost;
  };

  ControlProtocol guess = ControlProtocol::linear_ramp(f0, fT, T);
  double previous_cost = evaluate(guess);
  result.trace.stop_reason = StopReason::MaxSuperiterations;

  if (previous_cost < params.eta_error) {
    result.trace.stop_reason = StopReason::ErrorThreshold;
    result.best_cost = best_cost;
    return result;
  }

  std::mt19937_64 rng(params.seed);
  NelderMeadParams simplex = params.simplex;
  if (simplex.max_evaluations <= 0) simplex.max_evaluations = 200 * params.n_frequencies;
  simplex.target_cost = params.eta_error;

  for (int super = 1; super <= params.max_superiterations; ++super) {
    current_super = super;
    const PulseBasis basis = draw_basis(params, omega_max, rng);
    auto cost_fn = [&](const std::vector<double>& coeffs) {
      return evaluate(assemble_pulse(guess, basis, coeffs));
    };
    const NelderMeadResult nm =
        nelder_mead(cost_fn, std::vector<double>(params.n_frequencies, 0.0), simplex);

    result.trace.superiterations.push_back(
        {basis, nm.x_best, nm.cost_best, nm.n_evaluations});
    guess = assemble_pulse(guess, basis, nm.x_best);

    if (nm.cost_best < params.eta_error) {
      result.trace.stop_reason = StopReason::ErrorThreshold;
      break;
    }
    if (super >= 2) {
      // Guard: a vanished previous cost means there is nothing left to gain.
      if (previous_cost <= 0.0 ||
          1.0 - nm.cost_best / previous_cost < params.eta_change) {
        result.trace.stop_reason = StopReason::ChangeThreshold;
        break;
      }
    }
    previous_cost = nm.cost_best;
  }

  result.best_cost = best_cost;
  return result;
}

}  // namespace isingqoc
