#include "thermo.hpp"

#include <cmath>

namespace isingqoc {

namespace {

double real_trace_product(const Matrix& a, const Matrix& b, const char* what) {
  const complexd tr = (a * b).trace();
  if (std::abs(tr.imag()) > 1e-8)
    throw std::invalid_argument(std::string(what) +
                                ": trace has imaginary residue above 1e-8, inputs not Hermitian");
  return tr.real();
}

}  // namespace

double average_work(const Matrix& h0, const Matrix& hT, const Matrix& rho0,
                    const Matrix& rhoT) {
  if (h0.rows() != rho0.rows() || hT.rows() != rhoT.rows() || h0.rows() != hT.rows())
    throw std::invalid_argument("average_work: dimension mismatch");
  return real_trace_product(hT, rhoT, "average_work") -
         real_trace_product(h0, rho0, "average_work");
}

WorkDistribution work_distribution(const SpectralDecomposition& spec0,
                                   const SpectralDecomposition& specT, const Matrix& u_total,
                                   double beta) {
  const int dim = spec0.dim();
  const double unitarity = (u_total.adjoint() * u_total - Matrix::Identity(dim, dim))
                               .cwiseAbs()
                               .maxCoeff();
  if (unitarity > 1e-9)
    throw std::invalid_argument("work_distribution: propagator deviates from unitarity by " +
                                std::to_string(unitarity));

  WorkDistribution wd;
  wd.energies0 = spec0.eigenvalues;
  wd.energiesT = specT.eigenvalues;
  wd.initial_populations = gibbs_populations(spec0, beta);
  const Matrix overlaps = specT.eigenvectors.adjoint() * u_total * spec0.eigenvectors;
  wd.transition = overlaps.cwiseAbs2();
  return wd;
}

complexd characteristic_function(const WorkDistribution& wd, double u) {
  complexd g(0.0, 0.0);
  const int dim = static_cast<int>(wd.energies0.size());
  for (int m = 0; m < dim; ++m) {
    if (wd.initial_populations[m] == 0.0) continue;
    for (int n = 0; n < dim; ++n)
      g += wd.probability(n, m) * std::polar(1.0, u * wd.work_value(n, m));
  }
  return g;
}

double mean_work(const WorkDistribution& wd) {
  const int dim = static_cast<int>(wd.energies0.size());
  double w = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) w += wd.probability(n, m) * wd.work_value(n, m);
  return w;
}

double irreversible_entropy(double avg_work, double delta_F, double beta) {
  if (!(beta > 0.0)) throw config_error("irreversible entropy requires beta > 0");
  return beta * (avg_work - delta_F);
}

double inner_friction(const SpectralDecomposition& specT, const Matrix& rhoT,
                      const RealVector& initial_populations) {
  if (initial_populations.size() != specT.dim())
    throw std::invalid_argument("inner_friction: population vector has wrong length");
  if (std::abs(initial_populations.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("inner_friction: populations do not sum to one");
  // Tr[H rho] through the eigenbasis: sum_n E_n <n|rho|n>.
  const RealVector occupations =
      (specT.eigenvectors.adjoint() * rhoT * specT.eigenvectors).diagonal().real();
  return specT.eigenvalues.dot(occupations) - specT.eigenvalues.dot(initial_populations);
}

Matrix volume_entropy_operator(const SpectralDecomposition& spec) {
  const int dim = spec.dim();
  RealVector log_index(dim);
  for (size_t k = 0; k < spec.degeneracy_groups.size(); ++k)
    for (int member : spec.degeneracy_groups[k])
      log_index[member] = std::log(static_cast<double>(k) + 0.5);
  return spec.eigenvectors * log_index.asDiagonal() * spec.eigenvectors.adjoint();
}

double quantum_volume_entropy(const SpectralDecomposition& spec0,
                              const SpectralDecomposition& specT, const Matrix& rho0,
                              const Matrix& rhoT) {
  return real_trace_product(rhoT, volume_entropy_operator(specT), "quantum_volume_entropy") -
         real_trace_product(rho0, volume_entropy_operator(spec0), "quantum_volume_entropy");
}

IrreversibilityReport full_report(const SpinChainConfig& config,
                                  const ControlProtocol& protocol, const TimeGrid& grid) {
  const IsingOperators ops = make_ising_operators(config);
  const SpectralDecomposition spec0 = eigendecompose(hamiltonian_real(ops, protocol.f_start));
  const SpectralDecomposition specT = eigendecompose(hamiltonian_real(ops, protocol.f_end));
  const Matrix rho0 = gibbs_state(spec0, config.beta);

  Matrix rhoT;
  if (protocol.kind == ProtocolKind::SuddenQuench) {
    // The control sits at f_start for the entire window, and the Gibbs state
    // commutes with its own Hamiltonian, so rho(T) = rho(0) exactly.
    rhoT = rho0;
  } else {
    rhoT = propagate(config, protocol, grid, rho0).rho_final;
  }

  const Matrix h0 = hamiltonian_real(ops, protocol.f_start).cast<complexd>();
  const Matrix hT = hamiltonian_real(ops, protocol.f_end).cast<complexd>();

  IrreversibilityReport report;
  report.avg_work = average_work(h0, hT, rho0, rhoT);
  report.delta_F = free_energy_difference(spec0, specT, config.beta);
  report.s_irr = irreversible_entropy(report.avg_work, report.delta_F, config.beta);
  report.w_fric = inner_friction(specT, rhoT, gibbs_populations(spec0, config.beta));
  report.s_qvol = quantum_volume_entropy(spec0, specT, rho0, rhoT);
  return report;
}

}  // namespace isingqoc
