#include "spin_model.hpp"

#include <cmath>

namespace isingqoc {

namespace {

Matrix pauli_matrix(PauliAxis axis) {
  Matrix p(2, 2);
  switch (axis) {
    case PauliAxis::X:
      p << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      p << complexd(0, 0), complexd(0, -1), complexd(0, 1), complexd(0, 0);
      break;
    case PauliAxis::Z:
      p << 1, 0, 0, -1;
      break;
  }
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Matrix embed_pauli(const SpinChainConfig& config, int site, PauliAxis axis) {
  if (site < 1 || site > config.n_spins)
    throw config_error("pauli site " + std::to_string(site) + " out of range [1, " +
                       std::to_string(config.n_spins) + "]");
  Matrix op = Matrix::Identity(1, 1);
  for (int i = 1; i <= config.n_spins; ++i)
    op = kron(op, i == site ? pauli_matrix(axis) : Matrix::Identity(2, 2));
  return op;
}

IsingOperators make_ising_operators(const SpinChainConfig& config) {
  const int dim = config.dim();
  IsingOperators ops;
  ops.field = RealMatrix::Zero(dim, dim);
  for (int i = 1; i <= config.n_spins; ++i)
    ops.field += embed_pauli(config, i, PauliAxis::X).real();

  // sigma_z embeddings are diagonal, so the bond products reduce to
  // elementwise products of their diagonals.
  ops.coupling_diag = RealVector::Zero(dim);
  RealVector z_prev = embed_pauli(config, 1, PauliAxis::Z).diagonal().real();
  const RealVector z_first = z_prev;
  for (int i = 1; i <= config.n_spins; ++i) {
    const RealVector z_next = (i == config.n_spins)
                                  ? z_first
                                  : embed_pauli(config, i + 1, PauliAxis::Z).diagonal().real();
    ops.coupling_diag += z_prev.cwiseProduct(z_next);
    z_prev = z_next;
  }
  return ops;
}

RealMatrix hamiltonian_real(const IsingOperators& ops, double f) {
  RealMatrix h = -f * ops.field;
  h.diagonal() += ops.coupling_diag;
  return h;
}

RealMatrix hamiltonian_real(const SpinChainConfig& config, double f) {
  if (!std::isfinite(f)) throw config_error("control value must be finite");
  return hamiltonian_real(make_ising_operators(config), f);
}

Matrix build_hamiltonian(const SpinChainConfig& config, double f) {
  return hamiltonian_real(config, f).cast<complexd>();
}

}  // namespace isingqoc
