#pragma once

#include "dynamics.hpp"
#include "spectral.hpp"
#include "types.hpp"

namespace isingqoc {

/// The quantifiers of one driving run. s_irr = beta * (avg_work - delta_F)
/// holds by construction.
struct IrreversibilityReport {
  double avg_work = 0.0;
  double delta_F = 0.0;
  double s_irr = 0.0;
  double w_fric = 0.0;
  double s_qvol = 0.0;
};

/// Tr[H_T rho_T] - Tr[H_0 rho_0]. Traces must be real up to 1e-8 or the
/// inputs are rejected as non-Hermitian.
double average_work(const Matrix& h0, const Matrix& hT, const Matrix& rho0,
                    const Matrix& rhoT);

/// Two-point-measurement work statistics: measure H(f0) on the Gibbs state,
/// evolve, measure H(fT). transition(n, m) = |<n_T| U |m_0>|^2.
struct WorkDistribution {
  RealVector energies0;
  RealVector energiesT;
  RealVector initial_populations;  // Gibbs weights of the first measurement
  RealMatrix transition;

  double probability(int n, int m) const { return initial_populations[m] * transition(n, m); }
  double work_value(int n, int m) const { return energiesT[n] - energies0[m]; }
};

WorkDistribution work_distribution(const SpectralDecomposition& spec0,
                                   const SpectralDecomposition& specT, const Matrix& u_total,
                                   double beta);

/// G(u) = sum_{m,n} p_m p(n|m) exp(i u (E_n - E_m)); G(0) = 1.
complexd characteristic_function(const WorkDistribution& wd, double u);

/// First moment of the distribution, sum p * w.
double mean_work(const WorkDistribution& wd);

/// beta * (avg_work - delta_F); requires beta > 0.
double irreversible_entropy(double avg_work, double delta_F, double beta);

/// Tr[H(fT) rho(T)] - sum_m E_m(fT) P_m(0), with P ordered by ascending
/// energy at the initial control (the adiabatic label convention).
double inner_friction(const SpectralDecomposition& specT, const Matrix& rhoT,
                      const RealVector& initial_populations);

/// log(N_d + 1/2) where N_d numbers distinct eigenvalues ascending and all
/// members of a degenerate group share the same number.
Matrix volume_entropy_operator(const SpectralDecomposition& spec);

/// Tr[rho(T) S(T)] - Tr[rho(0) S(0)] with S the log-level-index operator
/// above; zero for adiabatic driving.
double quantum_volume_entropy(const SpectralDecomposition& spec0,
                              const SpectralDecomposition& specT, const Matrix& rho0,
                              const Matrix& rhoT);

/// Prepare the Gibbs state at f_start, drive it by the protocol, and compute
/// all quantifiers from that one trajectory. The sudden quench leaves the
/// state untouched on [0, T], so it is evaluated without numerical
/// propagation.
IrreversibilityReport full_report(const SpinChainConfig& config,
                                  const ControlProtocol& protocol, const TimeGrid& grid);

}  // namespace isingqoc
