#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dnoon/measures.hpp"
#include "dnoon/metrology.hpp"

using namespace dnoon;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE("metrology") {

TEST_CASE("expectation of A: anchors") {
  const auto fresh = evolve_coefficients(DampingParams::from_products(2, 0, 0, 0));
  CHECK(expectation_A(fresh, 0.0) == 1.0);
  CHECK(std::abs(expectation_A(fresh, M_PI / 4.0)) < 1e-15);  // phi = pi/(2N)
  const auto damped =
      evolve_coefficients(DampingParams::from_products(2, 0.1, 0.1, 0.0));
  CHECK(expectation_A(damped, 0.0) ==
        doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
  CHECK(second_moment_A(damped) ==
        doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
}

TEST_CASE("phase deviation: Heisenberg limit without damping") {
  for (int n : {1, 2, 3, 5}) {
    const DampingParams p = DampingParams::from_products(n, 0, 0, 0);
    CHECK(phase_deviation(p, M_PI / (2.0 * n)) ==
          doctest::Approx(1.0 / n).epsilon(1e-13));
  }
}

TEST_CASE("phase deviation: flagged infinite where the signal vanishes") {
  const DampingParams p = DampingParams::from_products(3, 0.1, 0.1, 0.05);
  CHECK(phase_deviation(p, 0.0) == kInf);
}

TEST_CASE("deviation at the magic phases equals the best deviation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> amp(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const int n = 1 + k % 5;
    DampingParams p;
    p.n_photons = n;
    p.gamma_amp_1 = amp(rng);
    p.gamma_amp_2 = amp(rng);
    p.gamma_phase_1 = amp(rng);
    p.gamma_phase_2 = amp(rng);
    p.time = 1.0;
    const double best = best_phase_deviation(p);
    for (int odd : {1, 3, 5}) {
      const double phi = odd * M_PI / (2.0 * n);
      CHECK(phase_deviation(p, phi) == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("best deviation anchors") {
  CHECK(best_phase_deviation(DampingParams::from_products(4, 0, 0, 0)) == 0.25);
  CHECK(best_phase_deviation(DampingParams::from_products(2, 0, 0, 0.1)) ==
        doctest::Approx(0.5 * std::exp(0.4)).epsilon(1e-14));
  CHECK(best_phase_deviation(DampingParams::from_products(2, 0.1, 0.1, 0)) ==
        doctest::Approx(0.5 * std::exp(0.1)).epsilon(1e-14));
}

TEST_CASE("minimality over a dense phi grid") {
  const DampingParams p = DampingParams::from_products(3, 0.2, 0.2, 0.05);
  const double best = best_phase_deviation(p);
  double min_seen = kInf;
  double argmin = 0.0;
  const int steps = 4001;
  for (int i = 1; i < steps; ++i) {
    const double phi = M_PI / 3.0 * i / steps;  // (0, pi/N)
    const double d = phase_deviation(p, phi);
    CHECK(d >= best - 1e-9);
    if (d < min_seen) {
      min_seen = d;
      argmin = phi;
    }
  }
  CHECK(min_seen == doctest::Approx(best).epsilon(1e-6));
  CHECK(std::abs(argmin - M_PI / 6.0) < M_PI / 3.0 / steps * 2);
}

TEST_CASE("periodicity and mirror symmetry of the deviation") {
  const DampingParams p = DampingParams::from_products(4, 0.1, 0.1, 0.02);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.02, 0.9);
  for (int k = 0; k < 50; ++k) {
    const double phi = u(rng) * M_PI / 4.0;
    const double base = phase_deviation(p, phi);
    CHECK(phase_deviation(p, phi + 2.0 * M_PI / 4.0) ==
          doctest::Approx(base).epsilon(1e-11));
    CHECK(phase_deviation(p, M_PI / 4.0 - phi) ==
          doctest::Approx(phase_deviation(p, M_PI / 4.0 + phi)).epsilon(1e-11));
  }
}

TEST_CASE("two-route check of the deviation formula") {
  // numerator^2 = <A^2> - <A>^2 and denominator = |d<A>/dphi| via a central
  // difference of expectation_A.
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> frac(0.15, 0.85);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 5;
    DampingParams p;
    p.n_photons = n;
    p.gamma_amp_1 = amp(rng);
    p.gamma_amp_2 = amp(rng);
    p.gamma_phase_1 = amp(rng);
    p.gamma_phase_2 = amp(rng);
    p.time = 1.0;
    const auto c = evolve_coefficients(p);
    const double phi = frac(rng) * M_PI / n;
    const double h = 1e-6;
    const double slope =
        std::abs(expectation_A(c, phi + h) - expectation_A(c, phi - h)) /
        (2.0 * h);
    const double mean = expectation_A(c, phi);
    const double num = std::sqrt(second_moment_A(c) - mean * mean);
    const double direct = phase_deviation(p, phi);
    CHECK(num / slope == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("distillation deviation: limits and a frozen value") {
  CHECK(distillation_phase_deviation(3, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(distillation_phase_deviation(3, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(3.0)));
  const double e_d = distillable_entanglement_dephasing(2, 0.1);
  CHECK(distillation_phase_deviation(2, e_d) ==
        doctest::Approx(std::sqrt(0.354236401715860 / 4.0 +
                                  (1.0 - 0.354236401715860) / 2.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS(distillation_phase_deviation(2, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(distillation_phase_deviation(2, -0.2), std::invalid_argument);
}

TEST_CASE("deviation bounds: anchors and ordering") {
  const auto undamped = deviation_bounds_amplitude(DampingParams::from_products(3, 0, 0, 0));
  CHECK(undamped.lower == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(undamped.upper == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto dead =
      deviation_bounds_amplitude(DampingParams::from_products(2, 50.0, 50.0, 0));
  CHECK(dead.lower == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(dead.upper == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));

  const auto mid = deviation_bounds_amplitude(DampingParams::from_products(2, 0.2, 0.2, 0));
  CHECK(mid.lower < mid.upper);

  CHECK_THROWS_AS(deviation_bounds_amplitude(DampingParams::from_products(2, 0.1, 0.5, 0)),
                  AsymmetricInputError);
  const auto manual = deviation_bounds_from_measures(2, 0.7, -0.2);
  CHECK(manual.i_c_clamped);
  CHECK(manual.upper == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("bound ordering and the Heisenberg floor on a grid") {
  for (int n : {2, 3, 4}) {
    for (int i = 0; i <= 20; ++i) {
      const DampingParams p =
          DampingParams::from_products(n, 0.05 * i, 0.05 * i, 0.0);
      const auto b = deviation_bounds_amplitude(p);
      CHECK(b.lower <= b.upper + 1e-12);
      CHECK(b.lower >= 1.0 / n - 1e-12);
      CHECK(best_phase_deviation(p) >= 1.0 / n - 1e-12);
    }
  }
}

TEST_CASE("performance ratio: anchors and route consistency") {
  CHECK(performance_ratio_dephasing(3, 0.0) == 1.0);
  CHECK(performance_ratio_dephasing(3, 50.0) == doctest::Approx(0.0));
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 5;
    const double gbar_t = g(rng);
    const double direct = performance_ratio_dephasing(n, gbar_t);
    const double e_d = distillable_entanglement_dephasing(n, gbar_t);
    const double dphi_d = distillation_phase_deviation(n, e_d);
    const double dphi_best =
        best_phase_deviation(DampingParams::from_products(n, 0, 0, gbar_t));
    CHECK(std::abs(direct - dphi_d * dphi_d / (dphi_best * dphi_best)) < 1e-12);
  }
}

TEST_CASE("direct measurement point carries consistent statistics") {
  const DampingParams p = DampingParams::from_products(2, 0.1, 0.1, 0.05);
  const auto pt = direct_measurement_point(p, 0.3);
  CHECK(pt.strategy == Strategy::direct);
  CHECK(pt.delta_A >= 0.0);
  const auto c = evolve_coefficients(p);
  CHECK(std::abs(pt.exp_A) <= 2.0 * c.c_off + 1e-15);
  CHECK(pt.delta_phi > 0.0);
}

TEST_CASE("strategy comparison under pure dephasing includes the exact rate") {
  const auto cmp = compare_strategies(DampingParams::from_products(3, 0, 0, 0.05));
  REQUIRE(cmp.delta_phi_d.has_value());
  REQUIRE(cmp.ratio.has_value());
  CHECK(*cmp.ratio ==
        doctest::Approx(*cmp.delta_phi_d * *cmp.delta_phi_d /
                        (cmp.delta_phi_best * cmp.delta_phi_best))
            .epsilon(1e-12));
  CHECK(cmp.delta_phi_dl <= *cmp.delta_phi_d + 1e-12);
  CHECK(*cmp.delta_phi_d <= cmp.delta_phi_du + 1e-12);

  const auto amp = compare_strategies(DampingParams::from_products(3, 0.2, 0.2, 0));
  CHECK_FALSE(amp.delta_phi_d.has_value());
  CHECK_FALSE(amp.ratio.has_value());
}

}  // TEST_SUITE
