#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "spectral.hpp"
#include "spin_model.hpp"

using namespace isingqoc;

namespace {

std::mt19937_64 rng_for(const char* tag) {
  return std::mt19937_64(std::hash<std::string>{}(tag));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1p-53);
}

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = complexd(uniform(rng, -1, 1), uniform(rng, -1, 1));
  return 0.5 * (a + a.adjoint().eval());
}

Matrix random_density_matrix(int dim, std::mt19937_64& rng) {
  const Matrix a = random_hermitian(dim, rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint().eval());
}

double von_neumann_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()[i];
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

}  // namespace

TEST_CASE("eigendecompose: diagonal input") {
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 3.0;
  h(1, 1) = 1.0;
  h(2, 2) = 2.0;
  const SpectralDecomposition spec = eigendecompose(h);
  CHECK(spec.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(spec.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(spec.eigenvalues[2] == doctest::Approx(3.0));
  // permutation eigenvectors with the real-positive phase convention
  CHECK(std::abs(spec.eigenvectors(1, 0) - complexd(1.0)) < 1e-12);
  CHECK(std::abs(spec.eigenvectors(2, 1) - complexd(1.0)) < 1e-12);
  CHECK(std::abs(spec.eigenvectors(0, 2) - complexd(1.0)) < 1e-12);
  CHECK(spec.degeneracy_groups.size() == 3);
}

TEST_CASE("eigendecompose: invariants on random Hermitian input") {
  auto rng = rng_for("spectral-invariants");
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix h = random_hermitian(8, rng);
    const SpectralDecomposition spec = eigendecompose(h);
    for (int i = 1; i < spec.dim(); ++i)
      CHECK(spec.eigenvalues[i] >= spec.eigenvalues[i - 1]);
    const Matrix vhv = spec.eigenvectors.adjoint() * spec.eigenvectors;
    CHECK((vhv - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
    const Matrix rebuilt = spec.eigenvectors * spec.eigenvalues.asDiagonal() *
                           spec.eigenvectors.adjoint();
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-10);
  }
  const Matrix not_hermitian = Matrix::Random(4, 4);
  CHECK_THROWS_AS(eigendecompose(not_hermitian), std::invalid_argument);
}

TEST_CASE("eigendecompose: two-spin analytic values") {
  const SpinChainConfig chain(2, 1.0);
  const SpectralDecomposition spec = eigendecompose(hamiltonian_real(chain, 1.0));
  const double r = 2.0 * std::sqrt(2.0);
  CHECK(spec.eigenvalues[0] == doctest::Approx(-r).epsilon(1e-12));
  CHECK(spec.eigenvalues[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(spec.eigenvalues[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spec.eigenvalues[3] == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("degeneracy grouping is transitive over near-ties") {
  Matrix h = Matrix::Zero(4, 4);
  h(0, 0) = 0.0;
  h(1, 1) = 8e-10;   // within delta of the previous
  h(2, 2) = 1.6e-9;  // within delta of the previous, not of the first
  h(3, 3) = 1.0;
  const SpectralDecomposition spec = eigendecompose(h, 1e-9);
  REQUIRE(spec.degeneracy_groups.size() == 2);
  CHECK(spec.degeneracy_groups[0] == std::vector<int>{0, 1, 2});
  CHECK(spec.degeneracy_groups[1] == std::vector<int>{3});
}

TEST_CASE("N=4 level crossing near f = 1 appears in the degeneracy structure") {
  // The -2f doublet meets the next level curve at f = 2/sqrt(3) ~ 1.1547,
  // the crossing responsible for the kink of the volume entropy in the
  // quench sweep just above f0 = 1.
  const SpinChainConfig chain(4, 50.0);
  const double f_cross = 2.0 / std::sqrt(3.0);
  const SpectralDecomposition at_crossing = eigendecompose(hamiltonian_real(chain, f_cross));
  const SpectralDecomposition nearby = eigendecompose(hamiltonian_real(chain, 1.1));
  CHECK(at_crossing.degeneracy_groups.size() < nearby.degeneracy_groups.size());
  CHECK(at_crossing.degeneracy_groups.size() == 9);
  CHECK(nearby.degeneracy_groups.size() == 11);
  bool has_triplet = false;
  for (const auto& group : at_crossing.degeneracy_groups)
    if (group.size() == 3) has_triplet = true;
  CHECK(has_triplet);
}

TEST_CASE("eigendecompose is deterministic across repeated calls") {
  const SpinChainConfig chain(4, 1.0);
  const RealMatrix h = hamiltonian_real(chain, 1.0);  // degenerate spectrum
  const SpectralDecomposition a = eigendecompose(h);
  const SpectralDecomposition b = eigendecompose(h);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partition_function_log") {
  SUBCASE("two degenerate zero levels give log 2") {
    Matrix h = Matrix::Zero(2, 2);
    const SpectralDecomposition spec = eigendecompose(h);
    CHECK(partition_function_log(spec, 3.7) == doctest::Approx(std::log(2.0)));
  }

  SUBCASE("two-spin closed form at f = 1, beta = 1") {
    const SpinChainConfig chain(2, 1.0);
    const SpectralDecomposition spec = eigendecompose(hamiltonian_real(chain, 1.0));
    const double expected =
        std::log(std::exp(-2.0) + std::exp(2.0) + 2.0 * std::cosh(2.0 * std::sqrt(2.0)));
    CHECK(partition_function_log(spec, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("beta = 0 counts states") {
    const SpinChainConfig chain(3, 0.0);
    const SpectralDecomposition spec = eigendecompose(hamiltonian_real(chain, 0.7));
    CHECK(partition_function_log(spec, 0.0) == doctest::Approx(3.0 * std::log(2.0)));
  }

  SUBCASE("log-sum-exp stays finite for beta up to 1e6") {
    Matrix h = Matrix::Zero(4, 4);
    h(0, 0) = -10.0;
    h(1, 1) = -3.0;
    h(2, 2) = 4.0;
    h(3, 3) = 10.0;
    const SpectralDecomposition spec = eigendecompose(h);
    for (const double beta : {1.0, 1e3, 1e6}) {
      const double log_z = partition_function_log(spec, beta);
      CHECK(std::isfinite(log_z));
      // dominated by the ground level once beta * gap >> 1
      if (beta >= 1e3) CHECK(log_z == doctest::Approx(10.0 * beta).epsilon(1e-9));
    }
  }
}

TEST_CASE("gibbs_state") {
  const SpinChainConfig chain(2, 1.0);
  const SpectralDecomposition spec = eigendecompose(hamiltonian_real(chain, 1.0));

  SUBCASE("beta = 0 is maximally mixed") {
    const Matrix rho = gibbs_state(spec, 0.0);
    CHECK((rho - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("large beta projects on the ground state") {
    const Matrix rho = gibbs_state(spec, 1e4);
    const Matrix ground =
        spec.eigenvectors.col(0) * spec.eigenvectors.col(0).adjoint();
    CHECK((rho - ground).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("commutes with the Hamiltonian") {
    auto rng = rng_for("gibbs-commute");
    for (int trial = 0; trial < 5; ++trial) {
      const double f = uniform(rng, -2, 2);
      const double beta = uniform(rng, 0.1, 60);
      const Matrix h = build_hamiltonian(chain, f);
      const Matrix rho = gibbs_state(eigendecompose(h), beta);
      CHECK((h * rho - rho * h).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(std::abs(rho.trace() - complexd(1.0)) < 1e-12);
    }
  }

  SUBCASE("minimizes the free energy functional") {
    const double beta = 2.5;
    const SpinChainConfig chain3(3, beta);
    const Matrix h = build_hamiltonian(chain3, 0.8);
    const SpectralDecomposition spec3 = eigendecompose(h);
    const Matrix rho_g = gibbs_state(spec3, beta);
    const double gibbs_free_energy =
        (h * rho_g).trace().real() - von_neumann_entropy(rho_g) / beta;
    auto rng = rng_for("gibbs-minimizer");
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix rho = random_density_matrix(8, rng);
      const double free_energy =
          (h * rho).trace().real() - von_neumann_entropy(rho) / beta;
      CHECK(free_energy >= gibbs_free_energy - 1e-9);
    }
  }
}

TEST_CASE("free_energy_difference") {
  const SpinChainConfig chain(2, 1.0);
  const SpectralDecomposition spec0 = eigendecompose(hamiltonian_real(chain, 0.0));
  const SpectralDecomposition spec1 = eigendecompose(hamiltonian_real(chain, 1.0));

  SUBCASE("identical endpoints give zero") {
    CHECK(free_energy_difference(spec0, spec0, 3.0) == doctest::Approx(0.0));
  }

  SUBCASE("two-spin analytic value") {
    const double expected =
        oracle::two_spin_log_partition(0.0, 1.0) - oracle::two_spin_log_partition(1.0, 1.0);
    CHECK(free_energy_difference(spec0, spec1, 1.0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("beta = 0 is rejected") {
    CHECK_THROWS_AS(free_energy_difference(spec0, spec1, 0.0), config_error);
  }

  SUBCASE("N=4 value against the Jacobi oracle") {
    const SpinChainConfig chain4(4, 50.0);
    const double got = free_energy_difference(eigendecompose(hamiltonian_real(chain4, 0.8)),
                                              eigendecompose(hamiltonian_real(chain4, 0.9)),
                                              50.0);
    const auto e0 = oracle::eig_jacobi(oracle::ising_matrix(4, 0.8));
    const auto e1 = oracle::eig_jacobi(oracle::ising_matrix(4, 0.9));
    const double expected =
        (oracle::log_partition(e0, 50.0) - oracle::log_partition(e1, 50.0)) / 50.0;
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("validate_density_matrix rejects broken states") {
  Matrix ok = Matrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(validate_density_matrix(ok));
  Matrix bad_trace = Matrix::Identity(4, 4) / 3.9;
  CHECK_THROWS_AS(validate_density_matrix(bad_trace), numeric_error);
  Matrix not_hermitian = ok;
  not_hermitian(0, 1) = complexd(0.1, 0.0);
  CHECK_THROWS_AS(validate_density_matrix(not_hermitian), numeric_error);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(validate_density_matrix(negative), numeric_error);
}
