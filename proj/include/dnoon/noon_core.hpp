#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace dnoon {

// Largest supported photon number. Binomial coefficients are kept exact in
// 64-bit integers up to this order; larger states are rejected.
inline constexpr int kMaxPhotons = 30;

// Thrown by closed-form operations that are only valid for symmetric
// amplitude damping (Gamma_1 == Gamma_2). Callers holding asymmetric states
// should use the numeric minimizer in oracle.hpp instead.
class AsymmetricInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical inputs of the two-mode damping channel: photon number N,
/// per-mode amplitude-damping rates Gamma_i, per-mode dephasing rates
/// gamma_i, and the elapsed time t. Every downstream formula depends on the
/// rates only through the dimensionless products Gamma*t and gamma*t, so
/// (rates*k, t/k) describes the same physics.
struct DampingParams {
  int n_photons = 1;
  double gamma_amp_1 = 0.0;    // Gamma_1, amplitude damping of mode a [1/time]
  double gamma_amp_2 = 0.0;    // Gamma_2, amplitude damping of mode b [1/time]
  double gamma_phase_1 = 0.0;  // gamma_1, dephasing of mode a [1/time]
  double gamma_phase_2 = 0.0;  // gamma_2, dephasing of mode b [1/time]
  double time = 0.0;

  double mean_amp() const { return 0.5 * (gamma_amp_1 + gamma_amp_2); }
  double mean_phase() const { return 0.5 * (gamma_phase_1 + gamma_phase_2); }

  bool symmetric_amp() const { return gamma_amp_1 == gamma_amp_2; }

  /// Convenience constructor from the dimensionless products the CLI works
  /// with (time is normalized to 1, the rates carry the products).
  static DampingParams from_products(int n_photons, double big_gamma1_t,
                                     double big_gamma2_t, double gamma_bar_t);

  /// Throws std::invalid_argument unless 1 <= N <= kMaxPhotons, all rates
  /// are finite and >= 0, and time is finite and >= 0.
  void validate() const;
};

/// Coefficient form of the damped NOON state: the state is diagonal in
/// {|00>, |m0>, |0m>} except for a single off-diagonal coupling c_off
/// between |N0> and |0N>.
struct DampedNoonCoefficients {
  int n_photons = 1;
  double c_00 = 0.0;
  std::vector<double> c_a;  // c_m0 for m = 1..N, index m-1
  std::vector<double> c_b;  // c_0m for m = 1..N, index m-1
  double c_off = 0.0;

  double c_n0() const { return c_a.back(); }
  double c_0n() const { return c_b.back(); }

  /// True when the two damped modes carry identical populations
  /// (c_m0 == c_0m for every m), the regime with closed-form entanglement.
  bool symmetric(double tol = 1e-12) const;

  /// Checks unit trace, entries in [0,1] and the positivity bound
  /// c_off <= sqrt(c_N0 * c_0N); throws std::invalid_argument on failure.
  void validate(double tol = 1e-9) const;
};

/// One basis vector |n_a, n_b> of the truncated two-mode Fock space.
struct BasisLabel {
  int n_a = 0;
  int n_b = 0;
  bool operator==(const BasisLabel&) const = default;
};

/// Dense real symmetric matrix over the truncated basis
/// [|00>, |10>..|N0>, |01>..|0N>, |NN>] (dimension 2N+2). The basis list may
/// be empty for plain symmetric matrices that never leave the eigensolver.
struct FockDensityMatrix {
  std::vector<BasisLabel> basis;
  int dim = 0;
  std::vector<double> entries;  // row-major dim*dim

  static FockDensityMatrix zero(int dim);

  double& at(int i, int j) { return entries[static_cast<size_t>(i) * dim + j]; }
  double at(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }
  double trace() const;
  double max_abs_asymmetry() const;
};

/// Basis ordering used everywhere: index 0 is |00>, indices 1..N are |m0>,
/// indices N+1..2N are |0m>, index 2N+1 is |NN>.
std::vector<BasisLabel> standard_basis(int n_photons);
inline int index_00(int /*n_photons*/) { return 0; }
inline int index_m0(int /*n_photons*/, int m) { return m; }
inline int index_0m(int n_photons, int m) { return n_photons + m; }
inline int index_nn(int n_photons) { return 2 * n_photons + 1; }
inline int basis_dim(int n_photons) { return 2 * n_photons + 2; }

/// Damped NOON-state coefficients after evolving for params.time under
/// simultaneous amplitude and phase damping:
///   c_m0  = 1/2 C(N,m) (1-e^{-G1 t})^{N-m} e^{-m G1 t}      (m >= 1)
///   c_0m  = same with G2
///   c_00  = 1/2 [(1-e^{-G1 t})^N + (1-e^{-G2 t})^N]
///   c_off = 1/2 e^{-N Gbar t - N^2 gbar t}
DampedNoonCoefficients evolve_coefficients(const DampingParams& params);

/// Two-mode characteristic function chi(mu1, mu2) = Tr[rho D(mu1) x D(mu2)]
/// of the damped state, in closed form.
std::complex<double> characteristic_function(const DampingParams& params,
                                             std::complex<double> mu1,
                                             std::complex<double> mu2);

/// Fock matrix element <m|D(mu)|n> of the single-mode displacement operator
/// D(mu) = exp(mu a^dag - mu^* a), via the associated-Laguerre closed form.
std::complex<double> displacement_matrix_element(int m, int n,
                                                 std::complex<double> mu);

/// Assembles the coefficients into a dense matrix on the standard basis.
/// The |NN> row and column are zero for the damped state itself; the slot
/// exists because separable edge states populate it.
FockDensityMatrix to_matrix(const DampedNoonCoefficients& coeffs);

}  // namespace dnoon
