#pragma once

#include <cstdint>

#include "dnoon/measures.hpp"
#include "dnoon/noon_core.hpp"

namespace dnoon {

// One-sided certificate slack and eigenvalue floor used throughout the
// brute-force machinery.
inline constexpr double kCertSlack = 1e-8;
inline constexpr double kEigSlack = 1e-10;

struct EigenDecomposition {
  int dim = 0;
  std::vector<double> eigenvalues;   // descending
  std::vector<double> eigenvectors;  // row-major; column j belongs to eigenvalues[j]

  double vec(int row, int col) const {
    return eigenvectors[static_cast<size_t>(row) * dim + col];
  }
};

/// Cyclic-sweep Jacobi diagonalization of a symmetric matrix (entries more
/// asymmetric than 1e-9 are rejected). Sweeps run until the off-diagonal
/// Frobenius norm drops below 1e-12 relative to the matrix scale.
EigenDecomposition eigendecompose_symmetric(const FockDensityMatrix& m);

/// Relative entropy S(rho||sigma) = Tr(rho log2 rho - rho log2 sigma) in
/// bits, evaluated through eigendecompositions. Returns +infinity when the
/// support of rho leaks outside the support of sigma (sigma eigenvalue below
/// 1e-13 carrying rho weight above 1e-10). Both inputs must be symmetric,
/// unit trace and positive semidefinite up to -1e-10.
double relative_entropy(const FockDensityMatrix& rho,
                        const FockDensityMatrix& sigma);

/// Partial transpose on mode b within the truncated basis. Entries whose
/// transposed position falls outside the basis trigger invalid_argument;
/// damped NOON states and separable edge states always stay inside.
FockDensityMatrix partial_transpose(const FockDensityMatrix& m);

double partial_transpose_min_eigenvalue(const FockDensityMatrix& m);
double partial_transpose_min_eigenvalue(const DampedNoonCoefficients& c);

/// The derivative kernel of the relative entropy at sigma_star:
///   B_mn = (ln chi_n - ln chi_m)/(chi_n - chi_m) <chi_m|rho|chi_n>
/// in the eigenbasis {|chi_n>} of sigma_star, with the 1/chi_n limit on
/// degenerate pairs, rotated back to the Fock basis. Tr(B sigma*) = Tr rho.
FockDensityMatrix build_B_operator(const FockDensityMatrix& rho,
                                   const FockDensityMatrix& sigma_star);

struct MinimizeResult {
  SeparableEdgeState sigma_star;
  double e_r = 0.0;  // bits
  int starts_used = 0;
  long evaluations = 0;
};

/// Brute-force minimization of S(rho||sigma) over the separable edge family,
/// for symmetric or asymmetric coefficients. Multi-start simplex descent over
/// the square roots of the diagonal weights (trace fixed by normalization,
/// d = sqrt(d_00 d_NN) by construction), followed by a Newton polish on the
/// analytic gradient so the result is tight enough to certify.
MinimizeResult minimize_relative_entropy(const DampedNoonCoefficients& rho,
                                         int n_starts = 64, double tol = 1e-10,
                                         std::uint64_t seed = 12345);

struct ExtremalityCertificate {
  double trace_b_sigma = 0.0;
  double max_product_overlap = 0.0;
  // Parameters of the best product state found: |alpha> has weight k1 split
  // between |0> and |N> at mixing angle theta1 (likewise k2/theta2 for
  // |beta>), eta is the relative phase on the cross term.
  double k1 = 0.0;
  double k2 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double eta = 0.0;
  int n_starts = 0;
  bool passed = false;
};

/// Checks the extremality condition max_{|ab>} <ab|B|ab> <= 1 by multi-start
/// maximization over product states (real amplitudes plus one phase on the
/// cross term, which is exact for the sparsity of B here), backed by a
/// lower-density fully-complex randomized spot check. Never throws on
/// failure; the verdict lives in the certificate.
ExtremalityCertificate verify_extremality(const DampedNoonCoefficients& rho,
                                          const SeparableEdgeState& sigma_star,
                                          int n_starts = 64,
                                          std::uint64_t seed = 12345);

}  // namespace dnoon
