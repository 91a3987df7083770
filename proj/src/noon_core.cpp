#include "dnoon/noon_core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace dnoon {
namespace {

bool finite(double x) { return std::isfinite(x); }

// Exact for n <= kMaxPhotons + small associated-Laguerre offsets; the largest
// value reached in-scope, C(62,31), still fits in 64 bits.
double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  std::uint64_t acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return static_cast<double>(acc);
}

double powi(double x, int n) {
  double acc = 1.0;
  for (int i = 0; i < n; ++i) acc *= x;
  return acc;
}

std::complex<double> powi(std::complex<double> x, int n) {
  std::complex<double> acc{1.0, 0.0};
  for (int i = 0; i < n; ++i) acc *= x;
  return acc;
}

double factorial(int n) {
  double acc = 1.0;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace

DampingParams DampingParams::from_products(int n_photons, double big_gamma1_t,
                                           double big_gamma2_t,
                                           double gamma_bar_t) {
  DampingParams p;
  p.n_photons = n_photons;
  p.gamma_amp_1 = big_gamma1_t;
  p.gamma_amp_2 = big_gamma2_t;
  p.gamma_phase_1 = gamma_bar_t;
  p.gamma_phase_2 = gamma_bar_t;
  p.time = 1.0;
  return p;
}

void DampingParams::validate() const {
  if (n_photons < 1 || n_photons > kMaxPhotons) {
    throw std::invalid_argument("n_photons must be in [1, " +
                                std::to_string(kMaxPhotons) + "]");
  }
  if (!finite(gamma_amp_1) || !finite(gamma_amp_2) || !finite(gamma_phase_1) ||
      !finite(gamma_phase_2) || !finite(time)) {
    throw std::invalid_argument("damping parameters must be finite");
  }
  if (gamma_amp_1 < 0 || gamma_amp_2 < 0 || gamma_phase_1 < 0 ||
      gamma_phase_2 < 0) {
    throw std::invalid_argument("damping rates must be non-negative");
  }
  if (time < 0) throw std::invalid_argument("time must be non-negative");
}

bool DampedNoonCoefficients::symmetric(double tol) const {
  for (size_t i = 0; i < c_a.size(); ++i) {
    if (std::abs(c_a[i] - c_b[i]) > tol) return false;
  }
  return true;
}

void DampedNoonCoefficients::validate(double tol) const {
  if (n_photons < 1 || n_photons > kMaxPhotons ||
      c_a.size() != static_cast<size_t>(n_photons) ||
      c_b.size() != static_cast<size_t>(n_photons)) {
    throw std::invalid_argument("malformed coefficient set");
  }
  double tr = c_00;
  for (double v : c_a) tr += v;
  for (double v : c_b) tr += v;
  if (std::abs(tr - 1.0) > tol) {
    throw std::invalid_argument("coefficients must have unit trace");
  }
  auto in01 = [tol](double v) { return v >= -tol && v <= 1.0 + tol; };
  bool ok = in01(c_00) && c_off >= -tol;
  for (double v : c_a) ok = ok && in01(v);
  for (double v : c_b) ok = ok && in01(v);
  if (!ok) throw std::invalid_argument("coefficients must lie in [0, 1]");
  if (c_off * c_off > c_n0() * c_0n() + tol) {
    throw std::invalid_argument(
        "c_off exceeds sqrt(c_N0*c_0N); state is not positive semidefinite");
  }
}

std::vector<BasisLabel> standard_basis(int n_photons) {
  std::vector<BasisLabel> basis;
  basis.reserve(static_cast<size_t>(basis_dim(n_photons)));
  basis.push_back({0, 0});
  for (int m = 1; m <= n_photons; ++m) basis.push_back({m, 0});
  for (int m = 1; m <= n_photons; ++m) basis.push_back({0, m});
  basis.push_back({n_photons, n_photons});
  return basis;
}

FockDensityMatrix FockDensityMatrix::zero(int dim) {
  FockDensityMatrix m;
  m.dim = dim;
  m.entries.assign(static_cast<size_t>(dim) * dim, 0.0);
  return m;
}

double FockDensityMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim; ++i) t += at(i, i);
  return t;
}

double FockDensityMatrix::max_abs_asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
    }
  }
  return worst;
}

DampedNoonCoefficients evolve_coefficients(const DampingParams& params) {
  params.validate();
  const int n = params.n_photons;
  const double g1 = params.gamma_amp_1 * params.time;
  const double g2 = params.gamma_amp_2 * params.time;
  const double decay1 = std::exp(-g1);
  const double decay2 = std::exp(-g2);
  const double loss1 = -std::expm1(-g1);  // 1 - e^{-G1 t}, accurate near 0
  const double loss2 = -std::expm1(-g2);

  DampedNoonCoefficients c;
  c.n_photons = n;
  c.c_00 = 0.5 * (powi(loss1, n) + powi(loss2, n));
  c.c_a.resize(static_cast<size_t>(n));
  c.c_b.resize(static_cast<size_t>(n));
  for (int m = 1; m <= n; ++m) {
    const double binom = binomial(n, m);
    c.c_a[static_cast<size_t>(m - 1)] =
        0.5 * binom * powi(loss1, n - m) * powi(decay1, m);
    c.c_b[static_cast<size_t>(m - 1)] =
        0.5 * binom * powi(loss2, n - m) * powi(decay2, m);
  }
  c.c_off = 0.5 * std::exp(-n * params.mean_amp() * params.time -
                           static_cast<double>(n) * n * params.mean_phase() *
                               params.time);
  return c;
}

std::complex<double> characteristic_function(const DampingParams& params,
                                             std::complex<double> mu1,
                                             std::complex<double> mu2) {
  params.validate();
  if (!finite(mu1.real()) || !finite(mu1.imag()) || !finite(mu2.real()) ||
      !finite(mu2.imag())) {
    throw std::invalid_argument("mu arguments must be finite");
  }
  const int n = params.n_photons;
  const unsigned un = static_cast<unsigned>(n);
  const double a1 = std::norm(mu1);
  const double a2 = std::norm(mu2);
  const double g1 = params.gamma_amp_1 * params.time;
  const double g2 = params.gamma_amp_2 * params.time;

  const double lag =
      std::laguerre(un, a1 * std::exp(-g1)) + std::laguerre(un, a2 * std::exp(-g2));
  const double coherence =
      std::exp(-n * params.mean_amp() * params.time -
               static_cast<double>(n) * n * params.mean_phase() * params.time);
  const std::complex<double> cross =
      coherence / factorial(n) *
      (powi(-std::conj(mu1) * mu2, n) + powi(-mu1 * std::conj(mu2), n));
  return 0.5 * std::exp(-0.5 * (a1 + a2)) * (lag + cross);
}

std::complex<double> displacement_matrix_element(int m, int n,
                                                 std::complex<double> mu) {
  if (m < 0 || n < 0) throw std::invalid_argument("Fock indices must be >= 0");
  const double x = std::norm(mu);
  if (m >= n) {
    double pref = 1.0;
    for (int k = n + 1; k <= m; ++k) pref /= std::sqrt(static_cast<double>(k));
    return pref * powi(mu, m - n) * std::exp(-0.5 * x) *
           std::assoc_laguerre(static_cast<unsigned>(n),
                               static_cast<unsigned>(m - n), x);
  }
  double pref = 1.0;
  for (int k = m + 1; k <= n; ++k) pref /= std::sqrt(static_cast<double>(k));
  return pref * powi(-std::conj(mu), n - m) * std::exp(-0.5 * x) *
         std::assoc_laguerre(static_cast<unsigned>(m),
                             static_cast<unsigned>(n - m), x);
}

FockDensityMatrix to_matrix(const DampedNoonCoefficients& coeffs) {
  coeffs.validate();
  const int n = coeffs.n_photons;
  FockDensityMatrix m = FockDensityMatrix::zero(basis_dim(n));
  m.basis = standard_basis(n);
  m.at(index_00(n), index_00(n)) = coeffs.c_00;
  for (int k = 1; k <= n; ++k) {
    m.at(index_m0(n, k), index_m0(n, k)) = coeffs.c_a[static_cast<size_t>(k - 1)];
    m.at(index_0m(n, k), index_0m(n, k)) = coeffs.c_b[static_cast<size_t>(k - 1)];
  }
  m.at(index_m0(n, n), index_0m(n, n)) = coeffs.c_off;
  m.at(index_0m(n, n), index_m0(n, n)) = coeffs.c_off;
  return m;
}

}  // namespace dnoon
