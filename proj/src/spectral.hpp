#pragma once

#include <vector>

#include "types.hpp"

namespace isingqoc {

/// Full eigendecomposition of a Hermitian operator with degeneracy bookkeeping.
/// Eigenvalues ascend; eigenvector phases follow a fixed convention (first
/// component of magnitude > 1e-12 made real-positive) and degenerate columns
/// are ordered lexicographically, so repeated runs are bit-identical.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;  // columns
  std::vector<std::vector<int>> degeneracy_groups;
  double delta_deg = 0.0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

constexpr double kDefaultDegeneracyTol = 1e-9;

SpectralDecomposition eigendecompose(const Matrix& h, double delta_deg = kDefaultDegeneracyTol);
SpectralDecomposition eigendecompose(const RealMatrix& h, double delta_deg = kDefaultDegeneracyTol);

/// log Z = log sum_m exp(-beta E_m), evaluated shift-stably.
double partition_function_log(const SpectralDecomposition& spec, double beta);

/// Thermal occupation of each level, ascending-energy order; sums to one.
RealVector gibbs_populations(const SpectralDecomposition& spec, double beta);

/// rho = exp(-beta H) / Z. beta = 0 gives the maximally mixed state.
Matrix gibbs_state(const SpectralDecomposition& spec, double beta);

/// (log Z(0) - log Z(T)) / beta between two decompositions at the same beta.
double free_energy_difference(const SpectralDecomposition& spec0,
                              const SpectralDecomposition& specT, double beta);

/// Sanity checks used before and after propagation: trace one, Hermitian,
/// no eigenvalue below -tol_psd.
void validate_density_matrix(const Matrix& rho, double tol_trace = 1e-9,
                             double tol_herm = 1e-9, double tol_psd = 1e-8);

}  // namespace isingqoc
