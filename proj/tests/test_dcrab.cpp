#include <doctest.h>

#include <cmath>

#include "dcrab.hpp"

using namespace isingqoc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("draw_basis") {
  DcrabParams params;
  params.n_frequencies = 4;

  SUBCASE("identical seeds give identical bases") {
    std::mt19937_64 a(123), b(123);
    const PulseBasis first = draw_basis(params, 40.0, a);
    const PulseBasis second = draw_basis(params, 40.0, b);
    CHECK(first.frequencies == second.frequencies);
    CHECK(first.phases == second.phases);
  }

  SUBCASE("frequencies are uniform on [0, omega_max], phases split evenly") {
    std::mt19937_64 rng(7);
    const double omega_max = 40.0;
    double freq_sum = 0.0;
    int half_pi_count = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const PulseBasis basis = draw_basis(params, omega_max, rng);
      for (double w : basis.frequencies) {
        CHECK(w >= 0.0);
        CHECK(w <= omega_max);
        freq_sum += w;
      }
      for (double phi : basis.phases) {
        CHECK((phi == 0.0 || phi == kPi / 2.0));
        if (phi != 0.0) ++half_pi_count;
      }
    }
    const double mean = freq_sum / (4.0 * draws);
    CHECK(std::abs(mean / (omega_max / 2.0) - 1.0) < 0.02);
    const double half_pi_fraction = half_pi_count / (4.0 * draws);
    CHECK(std::abs(half_pi_fraction / 0.5 - 1.0) < 0.02);
  }
}

TEST_CASE("default_omega_max follows the T * omega_max = 40 pi convention") {
  CHECK(default_omega_max(kPi) == doctest::Approx(40.0));
  CHECK(default_omega_max(kPi / 4.0) == doctest::Approx(160.0));
}

TEST_CASE("assemble_pulse") {
  const auto ramp = ControlProtocol::linear_ramp(0.8, 0.9, kPi);
  PulseBasis basis;
  basis.frequencies = {3.0, 11.0, 17.0, 29.0};
  basis.phases = {0.0, kPi / 2.0, 0.0, kPi / 2.0};

  SUBCASE("zero coefficients reproduce the guess") {
    const auto pulse = assemble_pulse(ramp, basis, {0.0, 0.0, 0.0, 0.0});
    for (double t = 0.0; t <= kPi; t += kPi / 37.0)
      CHECK(pulse.evaluate(t) == doctest::Approx(ramp.evaluate(t)).epsilon(1e-15));
  }

  SUBCASE("endpoints are pinned for any coefficients") {
    const auto pulse = assemble_pulse(ramp, basis, {0.4, -0.2, 0.7, 0.05});
    CHECK(pulse.evaluate(0.0) == 0.8);
    CHECK(pulse.evaluate(kPi) == 0.9);
    const auto layered = assemble_pulse(pulse, basis, {-0.3, 0.1, 0.2, -0.9});
    CHECK(layered.evaluate(0.0) == 0.8);
    CHECK(layered.evaluate(kPi) == 0.9);
    CHECK(layered.corrections.size() == 2);
  }

  SUBCASE("coefficient count must match the basis") {
    CHECK_THROWS_AS(assemble_pulse(ramp, basis, {1.0}), std::invalid_argument);
  }

  SUBCASE("a quench cannot be dressed") {
    const auto quench = ControlProtocol::sudden_quench(0.8, 0.9, kPi);
    CHECK_THROWS_AS(assemble_pulse(quench, basis, {0, 0, 0, 0}), std::invalid_argument);
  }
}

TEST_CASE("nelder_mead") {
  NelderMeadParams params;

  SUBCASE("4-D convex quadratic") {
    auto cost = [](const std::vector<double>& x) {
      double s = 0.0;
      for (double xi : x) s += (xi - 1.0) * (xi - 1.0);
      return s;
    };
    params.max_evaluations = 2000;
    const auto result = nelder_mead(cost, std::vector<double>(4, 0.0), params);
    for (double xi : result.x_best) CHECK(std::abs(xi - 1.0) < 1e-4);
  }

  SUBCASE("2-D Rosenbrock from (-1.2, 1) within 500 evaluations") {
    auto rosenbrock = [](const std::vector<double>& x) {
      const double a = 1.0 - x[0];
      const double b = x[1] - x[0] * x[0];
      return a * a + 100.0 * b * b;
    };
    params.max_evaluations = 500;
    params.initial_step = 0.1;
    const auto result = nelder_mead(rosenbrock, {-1.2, 1.0}, params);
    CHECK(result.cost_best < 1e-6);
    CHECK(result.n_evaluations <= 500);
  }

  SUBCASE("constant cost terminates by simplex size at the start point") {
    auto flat = [](const std::vector<double>&) { return 3.5; };
    params.max_evaluations = 10000;
    const auto result = nelder_mead(flat, {0.2, -0.4, 0.9}, params);
    CHECK(result.termination == NmTermination::Tolerance);
    CHECK(result.x_best == std::vector<double>{0.2, -0.4, 0.9});
    CHECK(result.cost_best == 3.5);
  }

  SUBCASE("target cost stops the search early") {
    auto cost = [](const std::vector<double>& x) { return x[0] * x[0]; };
    params.target_cost = 1e-2;
    params.max_evaluations = 1000;
    const auto result = nelder_mead(cost, {5.0}, params);
    CHECK(result.termination == NmTermination::TargetReached);
    CHECK(result.cost_best < 1e-2);
    CHECK(result.n_evaluations < 1000);
  }

  SUBCASE("evaluation trace records every call") {
    auto cost = [](const std::vector<double>& x) { return std::abs(x[0]); };
    std::vector<double> trace;
    params.max_evaluations = 60;
    const auto result = nelder_mead(cost, {1.0}, params, &trace);
    CHECK(static_cast<int>(trace.size()) == result.n_evaluations);
  }
}

TEST_CASE("optimize on a small chain") {
  const SpinChainConfig chain(3, 50.0);
  const double T = kPi / 4.0;
  const TimeGrid grid(T, 250);
  DcrabParams params;
  params.eta_error = params.eta_change = 1e-3;
  params.max_superiterations = 6;
  params.seed = 11;

  SUBCASE("already-optimal guess returns immediately") {
    const auto result = optimize(chain, 0.8, 0.8, T, grid, params);
    CHECK(result.trace.stop_reason == StopReason::ErrorThreshold);
    CHECK(result.trace.samples.size() == 1);
    CHECK(result.pulse.kind == ProtocolKind::LinearRamp);
    CHECK(result.best_cost < params.eta_error);
  }

  SUBCASE("optimization reaches the threshold and never worsens the guess") {
    const auto result = optimize(chain, 0.8, 0.9, T, grid, params);
    const double guess_cost = result.trace.samples.front().cost;
    CHECK(result.best_cost <= guess_cost + 1e-12);
    CHECK(result.trace.stop_reason == StopReason::ErrorThreshold);
    CHECK(result.best_cost < params.eta_error);
    CHECK(result.pulse.evaluate(0.0) == 0.8);
    CHECK(result.pulse.evaluate(T) == 0.9);

    // best-so-far cost is non-increasing along the trace
    double best = std::numeric_limits<double>::infinity();
    for (const TraceSample& s : result.trace.samples) {
      best = std::min(best, s.cost);
      CHECK(s.cost >= best);
      CHECK(s.s_irr == s.cost);  // default objective
    }
  }

  SUBCASE("identical seeds reproduce the trace bit for bit") {
    const auto a = optimize(chain, 0.8, 0.9, T, grid, params);
    const auto b = optimize(chain, 0.8, 0.9, T, grid, params);
    REQUIRE(a.trace.samples.size() == b.trace.samples.size());
    for (size_t i = 0; i < a.trace.samples.size(); ++i) {
      CHECK(a.trace.samples[i].cost == b.trace.samples[i].cost);
      CHECK(a.trace.samples[i].s_qvol == b.trace.samples[i].s_qvol);
    }
    REQUIRE(a.trace.superiterations.size() == b.trace.superiterations.size());
    for (size_t j = 0; j < a.trace.superiterations.size(); ++j) {
      CHECK(a.trace.superiterations[j].coefficients ==
            b.trace.superiterations[j].coefficients);
      CHECK(a.trace.superiterations[j].basis.frequencies ==
            b.trace.superiterations[j].basis.frequencies);
    }
  }

  SUBCASE("different objectives are honored") {
    const auto result = optimize(chain, 0.8, 0.9, T, grid, params, Objective::WFric);
    for (const TraceSample& s : result.trace.samples) CHECK(s.cost == s.w_fric);
  }

  SUBCASE("beta = 0 is rejected") {
    const SpinChainConfig hot(3, 0.0);
    CHECK_THROWS_AS(optimize(hot, 0.8, 0.9, T, grid, params), config_error);
  }
}

TEST_CASE("mix_seed decorrelates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(42, 7) == mix_seed(42, 7));
}
