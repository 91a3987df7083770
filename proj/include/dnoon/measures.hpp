#pragma once

#include <optional>

#include "dnoon/noon_core.hpp"

namespace dnoon {

/// Candidate extremal separable state sitting on the edge of the separable
/// set: same sparsity pattern as the damped state plus a |NN><NN| population,
/// constrained by d_off^2 = d_00 * d_NN.
struct SeparableEdgeState {
  int n_photons = 1;
  double d_00 = 0.0;
  double d_nn = 0.0;
  std::vector<double> d_a;  // d_m0 for m = 1..N
  std::vector<double> d_b;  // d_0m for m = 1..N
  double d_off = 0.0;

  double d_n0() const { return d_a.back(); }
  double d_0n() const { return d_b.back(); }

  /// Unit trace, edge condition, positivity; throws on violation.
  void validate(double tol = 1e-9) const;
};

/// Binary entropy H2(eps) = -eps log2 eps - (1-eps) log2(1-eps), with the
/// 0 log 0 := 0 convention. Throws for eps outside [0, 1].
double binary_entropy(double eps);

/// Closed-form minimizer of the relative entropy over the edge family, valid
/// for symmetric amplitude damping only (asymmetric input throws
/// AsymmetricInputError; use oracle::minimize_relative_entropy there).
SeparableEdgeState extremal_separable_state(const DampedNoonCoefficients& c);

/// Relative entropy of entanglement of the damped state, in bits:
///   E_r = 2(c_00+c_N0) [1 - H2((c_00+c_N0+c)/(2(c_00+c_N0)))].
/// Symmetric amplitude damping only.
double relative_entropy_of_entanglement(const DampedNoonCoefficients& c);

/// Upper bound on the entanglement of formation, in bits. The off-diagonal
/// block carries concurrence 2 c_off/(c_N0+c_0N), so
///   E_f+ = (c_N0+c_0N) H2((1 + sqrt(1 - (2 c_off)^2/(c_N0+c_0N)^2))/2).
/// Works for asymmetric damping; returns 0 when c_N0 + c_0N = 0.
double eof_upper_bound(const DampedNoonCoefficients& c);

/// Coherent information of the damped state in bits, S(rho_A) - S(rho_AB),
/// with the block eigenvalues c_pm = c_N0 +- c_off in the symmetric case.
/// May be negative under strong damping; the raw value is returned.
double coherent_information(const DampedNoonCoefficients& c);

/// Distillable entanglement under pure dephasing (Gamma_1 = Gamma_2 = 0):
///   E_d = 1 - H2(1/2 + 1/2 e^{-N^2 gbar t}).
double distillable_entanglement_dephasing(int n_photons, double gamma_t);

FockDensityMatrix to_matrix(const SeparableEdgeState& s);

/// All closed-form quantities at one parameter point (symmetric damping),
/// plus the c_pm / d_pm intermediates of the extremal state.
struct EntanglementReport {
  double e_r = 0.0;
  double e_f_upper = 0.0;
  double i_c = 0.0;
  std::optional<double> e_d_exact;  // present only when Gamma_1 = Gamma_2 = 0
  double c_plus = 0.0;
  double c_minus = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
};

EntanglementReport entanglement_report(const DampedNoonCoefficients& c);

}  // namespace dnoon
