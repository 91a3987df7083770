#include <doctest.h>

#include <cmath>
#include <random>

#include "dnoon/measures.hpp"
#include "dnoon/oracle.hpp"

using namespace dnoon;

namespace {

DampedNoonCoefficients sym_state(int n, double big_gamma_t, double gbar_t) {
  return evolve_coefficients(
      DampingParams::from_products(n, big_gamma_t, big_gamma_t, gbar_t));
}

// Explicit trace formula for E_r:
// c_00 log(c_00/d_00) + c_+ log(c_+/d_+) + c_- log(c_-/d_-).
double er_trace_route(const DampedNoonCoefficients& c,
                      const SeparableEdgeState& s) {
  auto term = [](double num, double den) {
    if (num <= 0.0) return 0.0;
    return num * std::log2(num / den);
  };
  return term(c.c_00, s.d_00) + term(c.c_n0() + c.c_off, s.d_n0() + s.d_off) +
         term(c.c_n0() - c.c_off, s.d_n0() - s.d_off);
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("binary entropy anchors") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // frozen from an independent high-precision evaluation
  CHECK(std::abs(binary_entropy(0.989177) - 0.086201031563692) < 1e-12);
  CHECK_THROWS_AS(binary_entropy(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.01), std::invalid_argument);
}

TEST_CASE("extremal separable state: undamped limit is the classical mixture") {
  const auto s = extremal_separable_state(sym_state(2, 0.0, 0.0));
  CHECK(s.d_n0() == 0.5);
  CHECK(s.d_0n() == 0.5);
  CHECK(s.d_00 == 0.0);
  CHECK(s.d_nn == 0.0);
  CHECK(s.d_off == 0.0);
  for (size_t m = 0; m + 1 < s.d_a.size(); ++m) {
    CHECK(s.d_a[m] == 0.0);
    CHECK(s.d_b[m] == 0.0);
  }
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("separable input is its own minimizer") {
  auto c = sym_state(2, 0.3, 0.0);
  c.c_off = 0.0;
  const auto s = extremal_separable_state(c);
  CHECK(s.d_00 == c.c_00);
  CHECK(s.d_nn == 0.0);
  CHECK(s.d_off == 0.0);
  CHECK(s.d_n0() == c.c_n0());
  CHECK(relative_entropy_of_entanglement(c) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("N=2 Gamma_t=0.1 edge state: frozen values and edge condition") {
  const auto c = sym_state(2, 0.1, 0.0);
  const auto s = extremal_separable_state(c);
  // frozen from an independent high-precision evaluation of the closed form
  CHECK(std::abs(s.d_00 - 0.21149939376789) < 1e-13);
  CHECK(std::abs(s.d_n0() - 0.206921899777163) < 1e-13);
  CHECK(std::abs(s.d_nn - 0.202443476761827) < 1e-13);
  CHECK(std::abs(s.d_off - 0.206921899777163) < 1e-13);
  CHECK(std::abs(s.d_off * s.d_off - s.d_00 * s.d_nn) < 1e-14);
  CHECK(s.d_a[0] == c.c_a[0]);
  // trace and PPT membership
  CHECK_NOTHROW(s.validate());
  CHECK(partial_transpose_min_eigenvalue(to_matrix(s)) > -kEigSlack);
}

TEST_CASE("asymmetric input is routed to the oracle") {
  const auto c = evolve_coefficients(DampingParams::from_products(2, 0.1, 0.4, 0.0));
  CHECK_THROWS_AS(extremal_separable_state(c), AsymmetricInputError);
  CHECK_THROWS_AS(relative_entropy_of_entanglement(c), AsymmetricInputError);
}

TEST_CASE("relative entropy of entanglement: anchors") {
  CHECK(relative_entropy_of_entanglement(sym_state(3, 0.0, 0.0)) == 1.0);
  // frozen from an independent high-precision evaluation
  CHECK(std::abs(relative_entropy_of_entanglement(sym_state(2, 0.1, 0.0)) -
                 0.764713907283189) < 1e-12);
}

TEST_CASE("pure dephasing collapses E_r onto the distillable entanglement") {
  for (int n : {2, 3, 4}) {
    for (double g : {0.0, 0.05, 0.2, 0.8}) {
      const double er = relative_entropy_of_entanglement(sym_state(n, 0.0, g));
      const double ed = distillable_entanglement_dephasing(n, g);
      const double ic = coherent_information(sym_state(n, 0.0, g));
      CHECK(std::abs(er - ed) < 1e-12);
      CHECK(std::abs(ic - er) < 1e-12);
    }
  }
}

TEST_CASE("two-route agreement between the closed form and the trace formula") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> amp(0.0, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 5;
    const auto c = sym_state(n, amp(rng), phase(rng));
    const auto s = extremal_separable_state(c);
    const double closed = relative_entropy_of_entanglement(c);
    CHECK(std::abs(closed - er_trace_route(c, s)) < 1e-12);
  }
}

TEST_CASE("E_r is non-increasing in time") {
  for (int n : {2, 4}) {
    for (double gph : {0.0, 0.3}) {
      double prev = 1.0 + 1e-12;
      for (int i = 0; i <= 60; ++i) {
        const auto c = sym_state(n, 0.05 * i, gph * 0.05 * i);
        const double er = relative_entropy_of_entanglement(c);
        CHECK(er <= prev + 1e-12);
        prev = er;
      }
    }
  }
}

TEST_CASE("entanglement-of-formation upper bound: anchors") {
  CHECK(eof_upper_bound(sym_state(4, 0.0, 0.0)) == 1.0);
  auto c = sym_state(2, 0.3, 0.0);
  c.c_off = 0.0;
  CHECK(eof_upper_bound(c) == 0.0);
  // N=5 without dephasing: the bound hugs E_r
  const auto c5 = sym_state(5, 0.1, 0.0);
  const double gap = eof_upper_bound(c5) - relative_entropy_of_entanglement(c5);
  MESSAGE("E_f+ - E_r at N=5, Gamma_t=0.1: ", gap);
  CHECK(gap >= 0.0);
  CHECK(gap < 0.05);
}

TEST_CASE("coherent information: anchors and sign freedom") {
  CHECK(coherent_information(sym_state(2, 0.0, 0.0)) == 1.0);
  for (double g : {0.05, 0.4}) {
    const auto c = sym_state(3, 0.0, g);
    const double expected =
        1.0 - binary_entropy(0.5 + 0.5 * std::exp(-9.0 * g));
    CHECK(std::abs(coherent_information(c) - expected) < 1e-12);
  }
  // strong amplitude damping drives I_c below zero; the raw value is kept
  const double ic = coherent_information(sym_state(2, 3.0, 0.0));
  CHECK(ic < 0.0);
  CHECK(std::abs(ic - (-0.282464720071960)) < 1e-12);
}

TEST_CASE("sandwich and upper-bound inequalities on a randomized grid") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> amp(0.0, 2.0);
  std::uniform_int_distribution<int> photons(1, 5);
  for (int k = 0; k < 300; ++k) {
    const auto c = sym_state(photons(rng), amp(rng), amp(rng));
    const double er = relative_entropy_of_entanglement(c);
    CHECK(coherent_information(c) <= er + 1e-9);
    CHECK(eof_upper_bound(c) >= er - 1e-9);
    CHECK(er >= 0.0);
  }
}

TEST_CASE("distillable entanglement under dephasing: anchors") {
  CHECK(distillable_entanglement_dephasing(3, 0.0) == 1.0);
  CHECK(distillable_entanglement_dephasing(3, 1e6) == doctest::Approx(0.0));
  // frozen: 1 - H2(1/2 + e^{-0.4}/2)
  CHECK(std::abs(distillable_entanglement_dephasing(2, 0.1) -
                 0.354236401715860) < 1e-12);
  CHECK_THROWS_AS(distillable_entanglement_dephasing(2, -0.1),
                  std::invalid_argument);
}

TEST_CASE("entanglement report carries the block intermediates") {
  const auto rep = entanglement_report(sym_state(2, 0.0, 0.1));
  REQUIRE(rep.e_d_exact.has_value());
  CHECK(std::abs(*rep.e_d_exact - rep.e_r) < 1e-15);
  CHECK(rep.c_plus == doctest::Approx(0.5 + 0.5 * std::exp(-0.4)));
  CHECK(rep.i_c <= rep.e_r + 1e-9);
  CHECK(rep.e_f_upper >= rep.e_r - 1e-9);

  const auto amp_only = entanglement_report(sym_state(2, 0.2, 0.0));
  CHECK_FALSE(amp_only.e_d_exact.has_value());
  CHECK(amp_only.d_plus > 0.0);
}

}  // TEST_SUITE
