#include "dnoon/measures.hpp"

#include <algorithm>
#include <cmath>

namespace dnoon {
namespace {

// x log2 x with the entropy convention 0 log 0 = 0.
double plog2p(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void require_symmetric(const DampedNoonCoefficients& c) {
  if (!c.symmetric()) {
    throw AsymmetricInputError(
        "closed form requires symmetric amplitude damping "
        "(c_m0 == c_0m); use oracle::minimize_relative_entropy");
  }
}

}  // namespace

void SeparableEdgeState::validate(double tol) const {
  if (n_photons < 1 || d_a.size() != static_cast<size_t>(n_photons) ||
      d_b.size() != static_cast<size_t>(n_photons)) {
    throw std::invalid_argument("malformed separable edge state");
  }
  double tr = d_00 + d_nn;
  for (double v : d_a) tr += v;
  for (double v : d_b) tr += v;
  if (std::abs(tr - 1.0) > tol) {
    throw std::invalid_argument("separable state must have unit trace");
  }
  bool nonneg = d_00 >= -tol && d_nn >= -tol && d_off >= -tol;
  for (double v : d_a) nonneg = nonneg && v >= -tol;
  for (double v : d_b) nonneg = nonneg && v >= -tol;
  if (!nonneg) throw std::invalid_argument("separable state has negative weight");
  if (std::abs(d_off * d_off - d_00 * d_nn) > tol) {
    throw std::invalid_argument("edge condition d^2 = d_00 d_NN violated");
  }
  if (d_off * d_off > d_n0() * d_0n() + tol) {
    throw std::invalid_argument("separable state is not positive semidefinite");
  }
}

double binary_entropy(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("binary entropy argument must be in [0, 1]");
  }
  return -plog2p(eps) - plog2p(1.0 - eps);
}

SeparableEdgeState extremal_separable_state(const DampedNoonCoefficients& c) {
  c.validate();
  require_symmetric(c);
  const int n = c.n_photons;
  if (c.c_off > c.c_n0() + 1e-12) {
    throw std::invalid_argument("c_off must not exceed c_N0");
  }

  SeparableEdgeState s;
  s.n_photons = n;
  s.d_a = c.c_b;  // d_m0 = d_0m = c_0m for m < N; slot N overwritten below
  s.d_b = c.c_b;

  if (c.c_00 <= 0.0) {
    // No amplitude damping has occurred; the limit of the closed form keeps
    // the minimizer inside the original support.
    s.d_00 = 0.0;
    s.d_nn = 0.0;
    s.d_off = 0.0;
    s.d_a.back() = c.c_n0();
    s.d_b.back() = c.c_n0();
    return s;
  }

  const double sum = c.c_n0() + c.c_00;
  const double denom = sum * sum - c.c_off * c.c_off;  // > 0 when c_00 > 0
  s.d_00 = sum * sum * c.c_00 / denom;
  s.d_nn = c.c_off * c.c_off * c.c_00 / denom;
  s.d_off = c.c_off * sum * c.c_00 / denom;
  s.d_a.back() = c.c_n0() - s.d_nn;
  s.d_b.back() = s.d_a.back();
  return s;
}

double relative_entropy_of_entanglement(const DampedNoonCoefficients& c) {
  c.validate();
  require_symmetric(c);
  const double sum = c.c_00 + c.c_n0();
  if (sum <= 0.0) return 0.0;
  return 2.0 * sum * (1.0 - binary_entropy((sum + c.c_off) / (2.0 * sum)));
}

double eof_upper_bound(const DampedNoonCoefficients& c) {
  c.validate();
  const double pop = c.c_n0() + c.c_0n();
  if (pop <= 0.0) return 0.0;
  const double concurrence = std::min(1.0, 2.0 * c.c_off / pop);
  return pop *
         binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - concurrence * concurrence)));
}

double coherent_information(const DampedNoonCoefficients& c) {
  c.validate();
  // Reduced state of mode a: weight c_00 + sum_m c_0m on |0> plus the c_m0.
  double q0 = c.c_00;
  for (double v : c.c_b) q0 += v;
  double entropy_a = -plog2p(q0);
  for (double v : c.c_a) entropy_a -= plog2p(v);

  // Joint spectrum: diagonal weights plus the eigenvalues of the 2x2 block
  // [[c_N0, c],[c, c_0N]]; for symmetric damping these are c_N0 +- c.
  const double avg = 0.5 * (c.c_n0() + c.c_0n());
  const double radius = std::hypot(0.5 * (c.c_n0() - c.c_0n()), c.c_off);
  double entropy_ab = -plog2p(c.c_00) - plog2p(avg + radius) -
                      plog2p(std::max(0.0, avg - radius));
  for (size_t m = 0; m + 1 < c.c_a.size(); ++m) {
    entropy_ab -= plog2p(c.c_a[m]) + plog2p(c.c_b[m]);
  }
  return entropy_a - entropy_ab;
}

double distillable_entanglement_dephasing(int n_photons, double gamma_t) {
  if (n_photons < 1 || n_photons > kMaxPhotons) {
    throw std::invalid_argument("n_photons out of range");
  }
  if (!(gamma_t >= 0.0)) {
    throw std::invalid_argument("gamma_t must be non-negative");
  }
  const double n2 = static_cast<double>(n_photons) * n_photons;
  return 1.0 - binary_entropy(0.5 + 0.5 * std::exp(-n2 * gamma_t));
}

FockDensityMatrix to_matrix(const SeparableEdgeState& s) {
  const int n = s.n_photons;
  FockDensityMatrix m = FockDensityMatrix::zero(basis_dim(n));
  m.basis = standard_basis(n);
  m.at(index_00(n), index_00(n)) = s.d_00;
  for (int k = 1; k <= n; ++k) {
    m.at(index_m0(n, k), index_m0(n, k)) = s.d_a[static_cast<size_t>(k - 1)];
    m.at(index_0m(n, k), index_0m(n, k)) = s.d_b[static_cast<size_t>(k - 1)];
  }
  m.at(index_nn(n), index_nn(n)) = s.d_nn;
  m.at(index_m0(n, n), index_0m(n, n)) = s.d_off;
  m.at(index_0m(n, n), index_m0(n, n)) = s.d_off;
  return m;
}

EntanglementReport entanglement_report(const DampedNoonCoefficients& c) {
  EntanglementReport r;
  r.e_r = relative_entropy_of_entanglement(c);
  r.e_f_upper = eof_upper_bound(c);
  r.i_c = coherent_information(c);
  // Pure dephasing leaves c_00 = 0 and c_N0 = 1/2; there E_d is exact and
  // coincides with E_r.
  if (c.c_00 == 0.0 && std::abs(c.c_n0() - 0.5) < 1e-12) {
    r.e_d_exact = r.e_r;
  }
  const SeparableEdgeState s = extremal_separable_state(c);
  r.c_plus = c.c_n0() + c.c_off;
  r.c_minus = c.c_n0() - c.c_off;
  r.d_plus = s.d_n0() + s.d_off;
  r.d_minus = s.d_n0() - s.d_off;
  return r;
}

}  // namespace dnoon
