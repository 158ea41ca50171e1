#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace isingqoc {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised for invalid run parameters, malformed config files, and the like.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine fails or produces a non-physical result.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised on file read/write failures.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Periodic transverse-field Ising ring: N spins at inverse temperature beta.
/// Energies are measured in units of the inter-spin coupling, which is fixed
/// to +1. beta = 0 stands for infinite temperature and is accepted only by
/// the operations that are well defined there.
struct SpinChainConfig {
  int n_spins;
  double beta;

  SpinChainConfig(int n_spins_, double beta_) : n_spins(n_spins_), beta(beta_) {
    if (n_spins < 2 || n_spins > 12)
      throw config_error("n_spins must be in [2, 12], got " + std::to_string(n_spins));
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw config_error("beta must be finite and >= 0, got " + std::to_string(beta));
  }

  int dim() const { return 1 << n_spins; }
};

inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace isingqoc
