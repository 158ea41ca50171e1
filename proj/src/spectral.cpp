#include "spectral.hpp"

#include <algorithm>
#include <cmath>

namespace isingqoc {

namespace {

// First component with magnitude above the zero cutoff is rotated to the
// real-positive axis; degenerate columns are then sorted lexicographically
// by (re, im) pairs. Keeps runs bit-reproducible even when the backend
// returns an arbitrary basis for a degenerate subspace.
void canonicalize(SpectralDecomposition& spec) {
  constexpr double zero_cutoff = 1e-12;
  const int n = spec.dim();
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      const complexd v = spec.eigenvectors(row, col);
      if (std::abs(v) > zero_cutoff) {
        spec.eigenvectors.col(col) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }

  auto lex_less = [&](int a, int b) {
    for (int row = 0; row < n; ++row) {
      const complexd va = spec.eigenvectors(row, a);
      const complexd vb = spec.eigenvectors(row, b);
      if (va.real() != vb.real()) return va.real() < vb.real();
      if (va.imag() != vb.imag()) return va.imag() < vb.imag();
    }
    return false;
  };

  for (const auto& group : spec.degeneracy_groups) {
    if (group.size() < 2) continue;
    std::vector<int> order = group;
    std::stable_sort(order.begin(), order.end(), lex_less);
    Matrix cols(n, static_cast<int>(order.size()));
    for (size_t k = 0; k < order.size(); ++k) cols.col(k) = spec.eigenvectors.col(order[k]);
    for (size_t k = 0; k < order.size(); ++k) spec.eigenvectors.col(group[k]) = cols.col(k);
  }
}

void group_degeneracies(SpectralDecomposition& spec, double delta_deg) {
  spec.delta_deg = delta_deg;
  spec.degeneracy_groups.clear();
  const int n = spec.dim();
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || spec.eigenvalues[i] - spec.eigenvalues[i - 1] > delta_deg) {
      std::vector<int> group(i - start);
      for (int k = start; k < i; ++k) group[k - start] = k;
      spec.degeneracy_groups.push_back(std::move(group));
      start = i;
    }
  }
}

}  // namespace

SpectralDecomposition eigendecompose(const RealMatrix& h, double delta_deg) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw numeric_error("symmetric eigensolver failed to converge (dim " +
                        std::to_string(h.rows()) + ")");
  SpectralDecomposition spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors().cast<complexd>();
  group_degeneracies(spec, delta_deg);
  canonicalize(spec);
  return spec;
}

SpectralDecomposition eigendecompose(const Matrix& h, double delta_deg) {
  if (!is_hermitian(h, 1e-12))
    throw std::invalid_argument("eigendecompose requires a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw numeric_error("Hermitian eigensolver failed to converge (dim " +
                        std::to_string(h.rows()) + ")");
  SpectralDecomposition spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors();
  group_degeneracies(spec, delta_deg);
  canonicalize(spec);
  return spec;
}

double partition_function_log(const SpectralDecomposition& spec, double beta) {
  if (!(beta >= 0.0)) throw config_error("partition function requires beta >= 0");
  const double e_min = spec.eigenvalues.minCoeff();
  double acc = 0.0;
  for (int m = 0; m < spec.dim(); ++m) acc += std::exp(-beta * (spec.eigenvalues[m] - e_min));
  return -beta * e_min + std::log(acc);
}

RealVector gibbs_populations(const SpectralDecomposition& spec, double beta) {
  if (!(beta >= 0.0)) throw config_error("Gibbs populations require beta >= 0");
  const double e_min = spec.eigenvalues.minCoeff();
  RealVector p(spec.dim());
  for (int m = 0; m < spec.dim(); ++m) p[m] = std::exp(-beta * (spec.eigenvalues[m] - e_min));
  p /= p.sum();
  return p;
}

Matrix gibbs_state(const SpectralDecomposition& spec, double beta) {
  const RealVector p = gibbs_populations(spec, beta);
  Matrix rho = spec.eigenvectors * p.asDiagonal() * spec.eigenvectors.adjoint();
  return 0.5 * (rho + rho.adjoint().eval());
}

double free_energy_difference(const SpectralDecomposition& spec0,
                              const SpectralDecomposition& specT, double beta) {
  if (!(beta > 0.0))
    throw config_error("free energy difference is undefined at beta = 0");
  return (partition_function_log(spec0, beta) - partition_function_log(specT, beta)) / beta;
}

void validate_density_matrix(const Matrix& rho, double tol_trace, double tol_herm,
                             double tol_psd) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  const double trace_err = std::abs(rho.trace() - complexd(1.0, 0.0));
  if (trace_err > tol_trace)
    throw numeric_error("density matrix trace deviates from 1 by " + std::to_string(trace_err));
  if (!is_hermitian(rho, tol_herm))
    throw numeric_error("density matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol_psd)
    throw numeric_error("density matrix has eigenvalue below -" + std::to_string(tol_psd));
}

}  // namespace isingqoc
