#pragma once

#include <optional>
#include <utility>

#include "dnoon/noon_core.hpp"

namespace dnoon {

/// <A> under the phase-shifted damped state, with A = |N0><0N| + |0N><N0|:
/// 2 c_off cos(N phi).
double expectation_A(const DampedNoonCoefficients& c, double phi);

/// <A^2> = c_N0 + c_0N, independent of the phase.
double second_moment_A(const DampedNoonCoefficients& c);

/// Phase deviation Delta phi = Delta A / |d<A>/d phi| of the direct
/// measurement. Returns +infinity where sin(N phi) = 0 (the operator carries
/// no phase information there); scans treat that as a flagged value, not an
/// error.
double phase_deviation(const DampingParams& p, double phi);

/// Minimum of the phase deviation over phi, attained at phi = (2k+1)pi/(2N):
///   (1/N) e^{N^2 gbar t} sqrt((e^{N G1 t} + e^{N G2 t})/2).
double best_phase_deviation(const DampingParams& p);

/// Deviation of the distill-then-measure strategy at distillation rate e_d:
/// sqrt(e_d/N^2 + (1-e_d)/N).
double distillation_phase_deviation(int n_photons, double e_d);

struct DeviationBounds {
  double lower = 0.0;  // from E_r
  double upper = 0.0;  // from I_c clamped to [0, 1]
  bool i_c_clamped = false;
};

/// Bounds on the distillation-strategy deviation under symmetric amplitude
/// damping, from E_r (lower) and I_c (upper). Asymmetric input throws; use
/// deviation_bounds_from_measures with oracle-supplied values instead.
DeviationBounds deviation_bounds_amplitude(const DampingParams& p);
DeviationBounds deviation_bounds_from_measures(int n_photons, double e_r,
                                               double i_c);

/// Ratio (Delta phi_d)^2/(Delta phi_best)^2 under pure dephasing:
/// [1 + (N-1) H2(1/2 + 1/2 e^{-N^2 gbar t})] e^{-2 N^2 gbar t}.
double performance_ratio_dephasing(int n_photons, double gamma_t);

enum class Strategy { direct, distill };

struct MetrologyPoint {
  double phi = 0.0;
  double exp_A = 0.0;
  double delta_A = 0.0;
  double delta_phi = 0.0;
  Strategy strategy = Strategy::direct;
};

MetrologyPoint direct_measurement_point(const DampingParams& p, double phi);

struct StrategyComparison {
  double delta_phi_best = 0.0;
  std::optional<double> delta_phi_d;  // exact only under pure dephasing
  double delta_phi_dl = 0.0;
  double delta_phi_du = 0.0;
  std::optional<double> ratio;  // (dphi_d)^2/(dphi_best)^2, dephasing only
  bool i_c_clamped = false;
};

StrategyComparison compare_strategies(const DampingParams& p);

}  // namespace dnoon
