#pragma once

#include "types.hpp"

namespace isingqoc {

enum class PauliAxis { X, Y, Z };

/// Single-site Pauli operator embedded on the full 2^N Hilbert space:
/// I x ... x sigma^axis x ... x I with the Pauli at position `site` (1-based).
Matrix embed_pauli(const SpinChainConfig& config, int site, PauliAxis axis);

/// f-independent pieces of the ring Hamiltonian, H(f) = coupling - f * field.
/// Both terms are real in the computational basis.
struct IsingOperators {
  RealMatrix field;          // sum_i sigma_x_i
  RealVector coupling_diag;  // diagonal of sum_i sigma_z_i sigma_z_{i+1}
};

IsingOperators make_ising_operators(const SpinChainConfig& config);

/// H(f) = -f sum_i sigma_x_i + sum_i sigma_z_i sigma_z_{i+1}, periodic wrap.
/// Real symmetric in the computational basis.
RealMatrix hamiltonian_real(const IsingOperators& ops, double f);
RealMatrix hamiltonian_real(const SpinChainConfig& config, double f);

/// Same Hamiltonian as a complex Hermitian matrix.
Matrix build_hamiltonian(const SpinChainConfig& config, double f);

}  // namespace isingqoc
