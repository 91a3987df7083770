#include "dnoon/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnoon/measures.hpp"

namespace dnoon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double expectation_A(const DampedNoonCoefficients& c, double phi) {
  c.validate();
  return 2.0 * c.c_off * std::cos(c.n_photons * phi);
}

double second_moment_A(const DampedNoonCoefficients& c) {
  c.validate();
  return c.c_n0() + c.c_0n();
}

double phase_deviation(const DampingParams& p, double phi) {
  p.validate();
  const int n = p.n_photons;
  const double s = std::sin(n * phi);
  if (s == 0.0) return kInf;
  const double g1 = n * p.gamma_amp_1 * p.time;
  const double g2 = n * p.gamma_amp_2 * p.time;
  const double coherence =
      std::exp(-n * p.mean_amp() * p.time -
               static_cast<double>(n) * n * p.mean_phase() * p.time);
  const double cos_n = std::cos(n * phi);
  const double var = 0.5 * (std::exp(-g1) + std::exp(-g2)) -
                     coherence * coherence * cos_n * cos_n;
  return std::sqrt(std::max(var, 0.0)) / (n * coherence * std::abs(s));
}

double best_phase_deviation(const DampingParams& p) {
  p.validate();
  const int n = p.n_photons;
  const double g1 = n * p.gamma_amp_1 * p.time;
  const double g2 = n * p.gamma_amp_2 * p.time;
  return std::exp(static_cast<double>(n) * n * p.mean_phase() * p.time) / n *
         std::sqrt(0.5 * (std::exp(g1) + std::exp(g2)));
}

double distillation_phase_deviation(int n_photons, double e_d) {
  if (n_photons < 1) throw std::invalid_argument("n_photons must be >= 1");
  if (!(e_d >= 0.0 && e_d <= 1.0)) {
    throw std::invalid_argument("distillation rate must lie in [0, 1]");
  }
  const double n = n_photons;
  return std::sqrt(e_d / (n * n) + (1.0 - e_d) / n);
}

DeviationBounds deviation_bounds_from_measures(int n_photons, double e_r,
                                               double i_c) {
  DeviationBounds b;
  const double clamped = std::clamp(i_c, 0.0, 1.0);
  b.i_c_clamped = clamped != i_c;
  b.lower = distillation_phase_deviation(n_photons, e_r);
  b.upper = distillation_phase_deviation(n_photons, clamped);
  return b;
}

DeviationBounds deviation_bounds_amplitude(const DampingParams& p) {
  p.validate();
  if (!p.symmetric_amp()) {
    throw AsymmetricInputError(
        "closed-form E_r needs symmetric amplitude damping; supply oracle "
        "values through deviation_bounds_from_measures");
  }
  const DampedNoonCoefficients c = evolve_coefficients(p);
  return deviation_bounds_from_measures(
      p.n_photons, relative_entropy_of_entanglement(c), coherent_information(c));
}

double performance_ratio_dephasing(int n_photons, double gamma_t) {
  if (n_photons < 1) throw std::invalid_argument("n_photons must be >= 1");
  if (!(gamma_t >= 0.0)) {
    throw std::invalid_argument("gamma_t must be non-negative");
  }
  const double n2 = static_cast<double>(n_photons) * n_photons;
  const double h = binary_entropy(0.5 + 0.5 * std::exp(-n2 * gamma_t));
  return (1.0 + (n_photons - 1) * h) * std::exp(-2.0 * n2 * gamma_t);
}

MetrologyPoint direct_measurement_point(const DampingParams& p, double phi) {
  const DampedNoonCoefficients c = evolve_coefficients(p);
  MetrologyPoint pt;
  pt.phi = phi;
  pt.strategy = Strategy::direct;
  pt.exp_A = expectation_A(c, phi);
  pt.delta_A = std::sqrt(std::max(0.0, second_moment_A(c) - pt.exp_A * pt.exp_A));
  pt.delta_phi = phase_deviation(p, phi);
  return pt;
}

StrategyComparison compare_strategies(const DampingParams& p) {
  p.validate();
  StrategyComparison out;
  out.delta_phi_best = best_phase_deviation(p);
  const DeviationBounds b = deviation_bounds_amplitude(p);
  out.delta_phi_dl = b.lower;
  out.delta_phi_du = b.upper;
  out.i_c_clamped = b.i_c_clamped;
  if (p.gamma_amp_1 == 0.0 && p.gamma_amp_2 == 0.0) {
    const double gbar_t = p.mean_phase() * p.time;
    const double e_d = distillable_entanglement_dephasing(p.n_photons, gbar_t);
    out.delta_phi_d = distillation_phase_deviation(p.n_photons, e_d);
    out.ratio = performance_ratio_dephasing(p.n_photons, gbar_t);
  }
  return out;
}

}  // namespace dnoon
