#include "dnoon/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

namespace dnoon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportCut = 1e-13;   // sigma eigenvalue below this is "zero"
constexpr double kSupportWeight = 1e-10;  // rho weight that may sit on a zero

double plog2p(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// ---------------------------------------------------------------------------
// Simplex (Nelder-Mead) minimizer shared by the searches below.

struct SimplexOptions {
  int max_iterations = 4000;
  double f_tol = 1e-12;
};

struct SimplexResult {
  std::vector<double> x;
  double f = kInf;
  int iterations = 0;
};

SimplexResult simplex_minimize(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& start, double step, const SimplexOptions& opt) {
  const size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> fv(n + 1);
  for (size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += (start[i] != 0.0 ? step * std::abs(start[i]) : step);
  }
  for (size_t i = 0; i <= n; ++i) fv[i] = objective(pts[i]);

  std::vector<size_t> order(n + 1);
  SimplexResult out;
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    const size_t best = order[0], worst = order[n], second = order[n - 1];
    if (std::isfinite(fv[best]) && std::isfinite(fv[second]) &&
        fv[second] - fv[best] <= opt.f_tol) {
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (size_t i = 0; i < n; ++i) centroid[i] += pts[k][i];
    }
    for (double& v : centroid) v /= static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (size_t i = 0; i < n; ++i) {
        p[i] = centroid[i] + coef * (pts[worst][i] - centroid[i]);
      }
      return p;
    };

    std::vector<double> refl = blend(-1.0);
    double f_refl = objective(refl);
    if (f_refl < fv[best]) {
      std::vector<double> expa = blend(-2.0);
      double f_expa = objective(expa);
      if (f_expa < f_refl) {
        pts[worst] = std::move(expa);
        fv[worst] = f_expa;
      } else {
        pts[worst] = std::move(refl);
        fv[worst] = f_refl;
      }
      continue;
    }
    if (f_refl < fv[second]) {
      pts[worst] = std::move(refl);
      fv[worst] = f_refl;
      continue;
    }
    std::vector<double> contr = blend(f_refl < fv[worst] ? -0.5 : 0.5);
    double f_contr = objective(contr);
    if (f_contr < std::min(f_refl, fv[worst])) {
      pts[worst] = std::move(contr);
      fv[worst] = f_contr;
      continue;
    }
    // Shrink towards the best vertex.
    for (size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      for (size_t i = 0; i < n; ++i) {
        pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
      }
      fv[k] = objective(pts[k]);
    }
  }

  size_t best = 0;
  for (size_t k = 1; k <= n; ++k) {
    if (fv[k] < fv[best]) best = k;
  }
  out.x = pts[best];
  out.f = fv[best];
  out.iterations = iter;
  return out;
}

// Simplex run plus geometrically shrinking restarts around the incumbent.
// The restart phases ignore the caller's tolerance and run until the simplex
// is flat to machine precision, which is what pins the parameters down.
SimplexResult simplex_with_restarts(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& start, double step, double f_tol) {
  SimplexOptions opt;
  opt.f_tol = f_tol;
  SimplexResult best = simplex_minimize(objective, start, step, opt);
  opt.f_tol = 1e-16;
  for (double s = step * 1e-2; s >= step * 1e-8; s *= 1e-2) {
    SimplexResult next = simplex_minimize(objective, best.x, s, opt);
    next.iterations += best.iterations;
    if (next.f <= best.f) best = std::move(next);
  }
  return best;
}

// Solves the small dense system A x = b in place (partial pivoting).
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
    }
    if (std::abs(at(pivot, col)) < 1e-300) return {};
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(col, j));
      std::swap(b[pivot], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double factor = at(r, col) / at(col, col);
      for (int j = col; j < n; ++j) at(r, j) -= factor * at(col, j);
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= at(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = acc / at(i, i);
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenDecomposition eigendecompose_symmetric(const FockDensityMatrix& m) {
  const int n = m.dim;
  if (n < 1 || m.entries.size() != static_cast<size_t>(n) * n) {
    throw std::invalid_argument("matrix is not square");
  }
  if (m.max_abs_asymmetry() > 1e-9) {
    throw std::invalid_argument("matrix is not symmetric");
  }

  std::vector<double> a = m.entries;
  auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
  // Work on the exactly symmetrized copy.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (A(i, j) + A(j, i));
      A(i, j) = A(j, i) = v;
    }
  }

  std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
  auto V = [&](int i, int j) -> double& { return v[static_cast<size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) V(i, i) = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  const double tol = 1e-12 * std::max(1.0, std::sqrt(frob));

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += 2.0 * A(i, j) * A(i, j);
    }
    if (std::sqrt(off) <= tol) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = A(p, p), aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = A(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = A(r, p), arq = A(r, q);
            A(r, p) = A(p, r) = arp - s * (arq + tau * arp);
            A(r, q) = A(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = vrp - s * (vrq + tau * vrp);
          V(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  EigenDecomposition out;
  out.dim = n;
  out.eigenvalues.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.eigenvalues[static_cast<size_t>(i)] = A(i, i);

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return out.eigenvalues[static_cast<size_t>(x)] >
           out.eigenvalues[static_cast<size_t>(y)];
  });

  std::vector<double> sorted_vals(static_cast<size_t>(n));
  std::vector<double> sorted_vecs(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    sorted_vals[static_cast<size_t>(j)] =
        out.eigenvalues[static_cast<size_t>(order[static_cast<size_t>(j)])];
    for (int i = 0; i < n; ++i) {
      sorted_vecs[static_cast<size_t>(i) * n + j] =
          V(i, order[static_cast<size_t>(j)]);
    }
  }
  out.eigenvalues = std::move(sorted_vals);
  out.eigenvectors = std::move(sorted_vecs);
  return out;
}

// ---------------------------------------------------------------------------
// Relative entropy through the spectral route

namespace {

// Weight of rho on the j-th eigenvector of the decomposition.
double rho_weight(const FockDensityMatrix& rho, const EigenDecomposition& es,
                  int j) {
  const int n = rho.dim;
  double acc = 0.0;
  for (int a = 0; a < n; ++a) {
    double row = 0.0;
    for (int b = 0; b < n; ++b) row += rho.at(a, b) * es.vec(b, j);
    acc += es.vec(a, j) * row;
  }
  return acc;
}

void check_state_preconditions(const FockDensityMatrix& m,
                               const EigenDecomposition& e, const char* name) {
  if (std::abs(m.trace() - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(name) + " must have unit trace");
  }
  if (e.eigenvalues.back() < -kEigSlack) {
    throw std::invalid_argument(std::string(name) +
                                " is not positive semidefinite");
  }
}

}  // namespace

double relative_entropy(const FockDensityMatrix& rho,
                        const FockDensityMatrix& sigma) {
  if (rho.dim != sigma.dim) {
    throw std::invalid_argument("dimension mismatch");
  }
  const EigenDecomposition er = eigendecompose_symmetric(rho);
  const EigenDecomposition es = eigendecompose_symmetric(sigma);
  check_state_preconditions(rho, er, "rho");
  check_state_preconditions(sigma, es, "sigma");

  double tr_rho_log_rho = 0.0;
  for (double lam : er.eigenvalues) tr_rho_log_rho += plog2p(lam);

  double tr_rho_log_sigma = 0.0;
  for (int j = 0; j < sigma.dim; ++j) {
    const double s = es.eigenvalues[static_cast<size_t>(j)];
    const double w = rho_weight(rho, es, j);
    if (s < kSupportCut) {
      if (w > kSupportWeight) return kInf;  // support violation flag
      continue;
    }
    tr_rho_log_sigma += w * std::log2(s);
  }

  double value = tr_rho_log_rho - tr_rho_log_sigma;
  if (value < 0.0 && value > -1e-9) value = 0.0;  // numerical zero
  return value;
}

// ---------------------------------------------------------------------------
// Partial transpose

FockDensityMatrix partial_transpose(const FockDensityMatrix& m) {
  if (m.basis.size() != static_cast<size_t>(m.dim)) {
    throw std::invalid_argument("partial transpose needs basis labels");
  }
  auto find = [&](int na, int nb) -> int {
    for (int k = 0; k < m.dim; ++k) {
      if (m.basis[static_cast<size_t>(k)].n_a == na &&
          m.basis[static_cast<size_t>(k)].n_b == nb) {
        return k;
      }
    }
    return -1;
  };
  FockDensityMatrix out = FockDensityMatrix::zero(m.dim);
  out.basis = m.basis;
  for (int i = 0; i < m.dim; ++i) {
    for (int j = 0; j < m.dim; ++j) {
      const double v = m.at(i, j);
      if (v == 0.0) continue;
      const BasisLabel& bi = m.basis[static_cast<size_t>(i)];
      const BasisLabel& bj = m.basis[static_cast<size_t>(j)];
      const int ti = find(bi.n_a, bj.n_b);
      const int tj = find(bj.n_a, bi.n_b);
      if (ti < 0 || tj < 0) {
        throw std::invalid_argument(
            "partial transpose leaves the truncated basis");
      }
      out.at(ti, tj) = v;
    }
  }
  return out;
}

double partial_transpose_min_eigenvalue(const FockDensityMatrix& m) {
  const EigenDecomposition e = eigendecompose_symmetric(partial_transpose(m));
  return e.eigenvalues.back();
}

double partial_transpose_min_eigenvalue(const DampedNoonCoefficients& c) {
  return partial_transpose_min_eigenvalue(to_matrix(c));
}

// ---------------------------------------------------------------------------
// B operator

FockDensityMatrix build_B_operator(const FockDensityMatrix& rho,
                                   const FockDensityMatrix& sigma_star) {
  if (rho.dim != sigma_star.dim) {
    throw std::invalid_argument("dimension mismatch");
  }
  const int n = rho.dim;
  const EigenDecomposition es = eigendecompose_symmetric(sigma_star);
  const double chi_max = std::max(es.eigenvalues.front(), 0.0);

  // rho in the eigenbasis of sigma*.
  std::vector<double> rx(static_cast<size_t>(n) * n, 0.0);
  {
    std::vector<double> tmp(static_cast<size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int b = 0; b < n; ++b) acc += rho.at(a, b) * es.vec(b, j);
        tmp[static_cast<size_t>(a) * n + j] = acc;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) acc += es.vec(a, i) * tmp[static_cast<size_t>(a) * n + j];
        rx[static_cast<size_t>(i) * n + j] = acc;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues[static_cast<size_t>(i)] < kSupportCut &&
        rx[static_cast<size_t>(i) * n + i] > kSupportWeight) {
      throw std::invalid_argument("support of rho leaks outside sigma*");
    }
  }

  std::vector<double> bx(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double chi_i = es.eigenvalues[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double chi_j = es.eigenvalues[static_cast<size_t>(j)];
      if (chi_i < kSupportCut || chi_j < kSupportCut) continue;
      double kernel;
      if (std::abs(chi_i - chi_j) <= 1e-12 * chi_max) {
        kernel = 1.0 / chi_j;  // degenerate limit
      } else {
        kernel = (std::log(chi_j) - std::log(chi_i)) / (chi_j - chi_i);
      }
      bx[static_cast<size_t>(i) * n + j] = kernel * rx[static_cast<size_t>(i) * n + j];
    }
  }

  FockDensityMatrix b = FockDensityMatrix::zero(n);
  b.basis = sigma_star.basis;
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += bx[static_cast<size_t>(i) * n + j] * es.vec(c, j);
        acc += es.vec(a, i) * row;
      }
      b.at(a, c) = acc;
    }
  }
  // Symmetrize away the last-bit noise of the rotation.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (b.at(i, j) + b.at(j, i));
      b.at(i, j) = b.at(j, i) = v;
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Minimization over the separable edge family

namespace {

// Free parameters are the square roots of the unnormalized diagonal weights,
// ordered like the basis: u = (u_00, u_10..uN0, u_01..u_0N, u_NN). The edge
// off-diagonal is |u_00 u_NN| and the trace is fixed by normalization.
struct EdgeFamily {
  int n_photons;
  int dim() const { return basis_dim(n_photons); }

  FockDensityMatrix sigma(const std::vector<double>& u) const {
    const int n = n_photons;
    FockDensityMatrix s = FockDensityMatrix::zero(dim());
    s.basis = standard_basis(n);
    double trace = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double w = u[static_cast<size_t>(i)] * u[static_cast<size_t>(i)];
      s.at(i, i) = w;
      trace += w;
    }
    const double off = std::abs(u[static_cast<size_t>(index_00(n))] *
                                u[static_cast<size_t>(index_nn(n))]);
    s.at(index_m0(n, n), index_0m(n, n)) = off;
    s.at(index_0m(n, n), index_m0(n, n)) = off;
    for (double& e : s.entries) e /= trace;
    return s;
  }

  bool feasible(const std::vector<double>& u) const {
    const int n = n_photons;
    const double w00 = u[static_cast<size_t>(index_00(n))] * u[static_cast<size_t>(index_00(n))];
    const double wnn = u[static_cast<size_t>(index_nn(n))] * u[static_cast<size_t>(index_nn(n))];
    const double wn0 = u[static_cast<size_t>(index_m0(n, n))] * u[static_cast<size_t>(index_m0(n, n))];
    const double w0n = u[static_cast<size_t>(index_0m(n, n))] * u[static_cast<size_t>(index_0m(n, n))];
    return w00 * wnn <= wn0 * w0n * (1.0 + 1e-13) + 1e-300;
  }

  SeparableEdgeState state(const std::vector<double>& u) const {
    const int n = n_photons;
    const FockDensityMatrix s = sigma(u);
    SeparableEdgeState out;
    out.n_photons = n;
    out.d_00 = s.at(index_00(n), index_00(n));
    out.d_nn = s.at(index_nn(n), index_nn(n));
    out.d_off = s.at(index_m0(n, n), index_0m(n, n));
    out.d_a.resize(static_cast<size_t>(n));
    out.d_b.resize(static_cast<size_t>(n));
    for (int m = 1; m <= n; ++m) {
      out.d_a[static_cast<size_t>(m - 1)] = s.at(index_m0(n, m), index_m0(n, m));
      out.d_b[static_cast<size_t>(m - 1)] = s.at(index_0m(n, m), index_0m(n, m));
    }
    return out;
  }
};

// -Tr rho ln sigma in nats (the rho-entropy part is constant during the
// search and added back at the end). Unlike the reporting path, weight on a
// near-null direction is never silently discarded: it pays its true
// -w ln(chi) price, clamped into a steep barrier at chi = 0. Without this
// the search drifts into the sliver where discarded weight makes the
// objective look better than it is.
double cross_entropy_nats(const FockDensityMatrix& rho,
                          const FockDensityMatrix& sigma) {
  const EigenDecomposition es = eigendecompose_symmetric(sigma);
  double acc = 0.0;
  for (int j = 0; j < sigma.dim; ++j) {
    const double s = es.eigenvalues[static_cast<size_t>(j)];
    const double w = rho_weight(rho, es, j);
    if (s < kSupportCut && w > kSupportWeight) return kInf;
    if (w <= 0.0) continue;
    acc -= w * std::log(std::max(s, 1e-300));
  }
  return acc;
}

// Analytic gradient of u -> -Tr rho ln sigma(u), through the B kernel:
// d/du_i = (2 u_i - Tr[B dM/du_i]) / T with T the unnormalized trace.
std::vector<double> cross_entropy_gradient(const EdgeFamily& family,
                                           const FockDensityMatrix& rho,
                                           const std::vector<double>& u) {
  const int n = family.n_photons;
  const FockDensityMatrix sig = family.sigma(u);
  const FockDensityMatrix b = build_B_operator(rho, sig);
  double trace = 0.0;
  for (double x : u) trace += x * x;

  const int i00 = index_00(n);
  const int inn = index_nn(n);
  const double b_cross = b.at(index_m0(n, n), index_0m(n, n));
  auto sign = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };

  std::vector<double> g(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    double tr_b_dm = 2.0 * u[i] * b.at(static_cast<int>(i), static_cast<int>(i));
    if (static_cast<int>(i) == i00) {
      tr_b_dm += 2.0 * sign(u[i]) * std::abs(u[static_cast<size_t>(inn)]) * b_cross;
    }
    if (static_cast<int>(i) == inn) {
      tr_b_dm += 2.0 * sign(u[i]) * std::abs(u[static_cast<size_t>(i00)]) * b_cross;
    }
    g[i] = (2.0 * u[i] - tr_b_dm) / trace;
  }
  return g;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Newton iterations on an analytic gradient, with the Hessian taken by
// central differences of that gradient. Both parametrizations used here are
// scale invariant (x and k*x give the same state), so the Hessian is singular
// along x; the x x^T term fixes that gauge without moving the solution.
// try_gradient reports where the gradient cannot be evaluated (infeasible or
// support-breaking points); persistent contact with such a region ends the
// polish and keeps the incumbent.
void newton_on_gradient(
    const std::function<bool(const std::vector<double>&, std::vector<double>&)>&
        try_gradient,
    std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<double> g;
  if (!try_gradient(x, g)) return;
  double gnorm = inf_norm(g);
  for (int iter = 0; iter < 40 && gnorm > 1e-13; ++iter) {
    std::vector<double> h(n * n);
    for (size_t i = 0; i < n; ++i) {
      double step = 1e-6 * std::max(std::abs(x[i]), 1e-3);
      std::vector<double> gp, gm;
      bool ok = false;
      for (int shrink = 0; shrink < 5 && !ok; ++shrink, step *= 0.25) {
        std::vector<double> xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        ok = try_gradient(xp, gp) && try_gradient(xm, gm);
      }
      if (!ok) return;  // boundary contact
      step *= 4.0;  // undo the final loop shrink
      for (size_t j = 0; j < n; ++j) {
        h[j * n + i] = (gp[j] - gm[j]) / (2.0 * step);
      }
    }
    double hscale = 0.0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        const double v = 0.5 * (h[i * n + j] + h[j * n + i]);
        h[i * n + j] = h[j * n + i] = v;
      }
      hscale = std::max(hscale, std::abs(h[i * n + i]));
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) h[i * n + j] += x[i] * x[j];  // gauge fix
      h[i * n + i] += 1e-12 * std::max(1.0, hscale);
    }

    const std::vector<double> delta = solve_dense(h, g);
    if (delta.empty()) break;

    bool accepted = false;
    double factor = 1.0;
    for (int ls = 0; ls < 8; ++ls, factor *= 0.25) {
      std::vector<double> cand(n);
      for (size_t i = 0; i < n; ++i) cand[i] = x[i] - factor * delta[i];
      std::vector<double> gc;
      if (!try_gradient(cand, gc)) continue;
      const double gn = inf_norm(gc);
      if (gn < gnorm) {
        x = std::move(cand);
        g = std::move(gc);
        gnorm = gn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
}

std::vector<double> seed_from_state(const EdgeFamily& family,
                                    const SeparableEdgeState& s) {
  const int n = family.n_photons;
  std::vector<double> u(static_cast<size_t>(family.dim()), 0.0);
  auto root = [](double x) { return std::sqrt(std::max(x, 0.0)); };
  u[static_cast<size_t>(index_00(n))] = root(s.d_00);
  u[static_cast<size_t>(index_nn(n))] = root(s.d_nn);
  for (int m = 1; m <= n; ++m) {
    u[static_cast<size_t>(index_m0(n, m))] = root(s.d_a[static_cast<size_t>(m - 1)]);
    u[static_cast<size_t>(index_0m(n, m))] = root(s.d_b[static_cast<size_t>(m - 1)]);
  }
  return u;
}

}  // namespace

MinimizeResult minimize_relative_entropy(const DampedNoonCoefficients& rho_c,
                                         int n_starts, double tol,
                                         std::uint64_t seed) {
  rho_c.validate();
  if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  const EdgeFamily family{rho_c.n_photons};
  const FockDensityMatrix rho = to_matrix(rho_c);

  long evaluations = 0;
  auto objective = [&](const std::vector<double>& u) -> double {
    ++evaluations;
    if (!family.feasible(u)) return kInf;
    return cross_entropy_nats(rho, family.sigma(u));
  };

  // Deterministic seed: the symmetric closed form applied to the symmetrized
  // coefficients, slightly pulled into the interior.
  DampedNoonCoefficients sym = rho_c;
  for (size_t i = 0; i < sym.c_a.size(); ++i) {
    const double avg = 0.5 * (sym.c_a[i] + sym.c_b[i]);
    sym.c_a[i] = sym.c_b[i] = avg;
  }
  double symtr = sym.c_00;
  for (double x : sym.c_a) symtr += x;
  for (double x : sym.c_b) symtr += x;
  sym.c_00 += 1.0 - symtr;  // absorb rounding into the vacuum weight
  sym.c_00 = std::max(sym.c_00, 0.0);
  sym.c_off = std::min(sym.c_off, 0.999 * std::sqrt(sym.c_n0() * sym.c_0n()));
  std::vector<double> u0 = seed_from_state(family, extremal_separable_state(sym));
  // Keep every coordinate alive so the simplex can move it.
  for (double& x : u0) x = std::max(x, 0.02);
  {
    // Restore asymmetry of the m0 / 0m populations in the seed.
    const int n = rho_c.n_photons;
    for (int m = 1; m < n; ++m) {
      u0[static_cast<size_t>(index_m0(n, m))] =
          std::max(0.02, std::sqrt(std::max(rho_c.c_a[static_cast<size_t>(m - 1)], 0.0)));
      u0[static_cast<size_t>(index_0m(n, m))] =
          std::max(0.02, std::sqrt(std::max(rho_c.c_b[static_cast<size_t>(m - 1)], 0.0)));
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> best_x;
  double best_f = kInf;
  int used = 0;
  int stale = 0;
  const int kMinStarts = std::min(n_starts, 16);
  for (int start = 0; start < n_starts; ++start) {
    std::vector<double> x = u0;
    if (start > 0) {
      for (double& xi : x) xi *= std::exp(0.35 * gauss(rng));
      if (!family.feasible(x)) {
        // Pull the |NN> weight back under the positivity cap.
        const int n = rho_c.n_photons;
        const size_t inn = static_cast<size_t>(index_nn(n));
        const size_t i00 = static_cast<size_t>(index_00(n));
        const double cap = std::abs(x[static_cast<size_t>(index_m0(n, n))] *
                                    x[static_cast<size_t>(index_0m(n, n))]);
        x[inn] = 0.9 * cap / std::max(std::abs(x[i00]), 1e-12);
      }
    }
    if (!family.feasible(x)) continue;
    // Cheap basin location; the winner gets the deep treatment below.
    SimplexOptions quick;
    quick.f_tol = std::max(tol, 1e-11);
    quick.max_iterations = 2500;
    SimplexResult r = simplex_minimize(objective, x, 0.25, quick);
    quick.f_tol = 1e-13;
    quick.max_iterations = 1500;
    r = simplex_minimize(objective, r.x, 2.5e-3, quick);
    ++used;
    if (r.f < best_f - 1e-12) {
      best_f = r.f;
      best_x = r.x;
      stale = 0;
    } else {
      ++stale;
    }
    if (start + 1 >= kMinStarts && stale >= 8) break;
  }
  if (best_x.empty()) {
    throw std::runtime_error(
        "no feasible separable edge state found from any start");
  }

  best_x = simplex_with_restarts(objective, best_x, 0.25, tol).x;
  for (double& xi : best_x) xi = std::abs(xi);
  // Optima on the positivity boundary are not unconstrained stationary
  // points; the guard makes the polish quit there and keep the simplex
  // result (the boundary slice below takes over).
  newton_on_gradient(
      [&](const std::vector<double>& x, std::vector<double>& out) {
        if (!family.feasible(x) || !std::isfinite(objective(x))) return false;
        out = cross_entropy_gradient(family, rho, x);
        return true;
      },
      best_x);

  // When the positivity constraint d <= sqrt(d_N0 d_0N) binds (it does for
  // vanishing dephasing), the transverse valley is too flat for function
  // values to resolve. On the boundary submanifold the block is singular and
  // a finite relative entropy pins its null direction to the null of rho's
  // block, which fixes the N0/0N weight ratio outright. Searching that slice
  // with its own Newton polish restores full accuracy.
  {
    const int n = rho_c.n_photons;
    auto weight = [&](int idx) {
      return best_x[static_cast<size_t>(idx)] * best_x[static_cast<size_t>(idx)];
    };
    const double cap = weight(index_m0(n, n)) * weight(index_0m(n, n));
    const double dsq = weight(index_00(n)) * weight(index_nn(n));
    if (cap > 0.0 && dsq > 0.98 * cap && rho_c.c_n0() > 0.0 &&
        rho_c.c_0n() > 0.0) {
      const double ratio_sq = std::sqrt(rho_c.c_n0() / rho_c.c_0n());
      const size_t nv = static_cast<size_t>(2 * n);
      const int i00 = index_00(n), inn = index_nn(n);
      const int in0 = index_m0(n, n), i0n = index_0m(n, n);

      auto expand = [&](const std::vector<double>& v) {
        std::vector<double> u(static_cast<size_t>(family.dim()), 0.0);
        u[static_cast<size_t>(i00)] = v[0];
        for (int m = 1; m < n; ++m) {
          u[static_cast<size_t>(index_m0(n, m))] = v[static_cast<size_t>(m)];
          u[static_cast<size_t>(index_0m(n, m))] = v[static_cast<size_t>(n - 1 + m)];
        }
        u[static_cast<size_t>(inn)] = v[nv - 1];
        const double d_raw = std::abs(v[0] * v[nv - 1]);
        u[static_cast<size_t>(in0)] = std::sqrt(d_raw * ratio_sq);
        u[static_cast<size_t>(i0n)] = std::sqrt(d_raw / ratio_sq);
        return u;
      };
      auto reduced = [&](const std::vector<double>& v) {
        return objective(expand(v));
      };
      auto reduced_gradient = [&](const std::vector<double>& v) {
        const std::vector<double> u = expand(v);
        const FockDensityMatrix sig = family.sigma(u);
        const FockDensityMatrix b = build_B_operator(rho, sig);
        double trace = 0.0;
        for (double x : u) trace += x * x;
        auto sign = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
        std::vector<double> g(nv);
        for (size_t k = 0; k < nv; ++k) {
          double d_t = 2.0 * v[k];
          double tr_b_dm = 2.0 * v[k] *
                           ((k == 0)          ? b.at(i00, i00)
                            : (k == nv - 1)   ? b.at(inn, inn)
                            : (k < static_cast<size_t>(n))
                                ? b.at(index_m0(n, static_cast<int>(k)),
                                       index_m0(n, static_cast<int>(k)))
                                : b.at(index_0m(n, static_cast<int>(k) - n + 1),
                                       index_0m(n, static_cast<int>(k) - n + 1)));
          if (k == 0 || k == nv - 1) {
            const double other = (k == 0) ? v[nv - 1] : v[0];
            const double d_draw = sign(v[k]) * std::abs(other);
            d_t += d_draw * (ratio_sq + 1.0 / ratio_sq);
            tr_b_dm += d_draw * (ratio_sq * b.at(in0, in0) +
                                 b.at(i0n, i0n) / ratio_sq + 2.0 * b.at(in0, i0n));
          }
          g[k] = (d_t - tr_b_dm) / trace;
        }
        return g;
      };

      std::vector<double> v0(nv, 0.0);
      v0[0] = best_x[static_cast<size_t>(i00)];
      for (int m = 1; m < n; ++m) {
        v0[static_cast<size_t>(m)] = best_x[static_cast<size_t>(index_m0(n, m))];
        v0[static_cast<size_t>(n - 1 + m)] = best_x[static_cast<size_t>(index_0m(n, m))];
      }
      v0[nv - 1] = best_x[static_cast<size_t>(inn)];

      SimplexResult rb = simplex_with_restarts(reduced, v0, 0.05, tol);
      // The slice has no positivity boundary to fall off; only finiteness
      // (support alignment) guards the gradient.
      newton_on_gradient(
          [&](const std::vector<double>& v, std::vector<double>& out) {
            if (!std::isfinite(reduced(v))) return false;
            out = reduced_gradient(v);
            return true;
          },
          rb.x);
      rb.f = reduced(rb.x);
      if (rb.f <= objective(best_x) + 1e-12) best_x = expand(rb.x);
    }
  }

  MinimizeResult out;
  out.sigma_star = family.state(best_x);
  out.e_r = relative_entropy(rho, family.sigma(best_x));
  out.starts_used = used;
  out.evaluations = evaluations;
  return out;
}

// ---------------------------------------------------------------------------
// Extremality certificate

namespace {

// <alpha beta|B|alpha beta> for a product state with real mode amplitudes a,
// b (normalized inside) and phase eta on the alpha_N amplitude. Components
// outside the truncated basis cannot couple through B and drop out.
double product_overlap(const FockDensityMatrix& b, int n,
                       const std::vector<double>& a_raw,
                       const std::vector<double>& b_raw, double eta) {
  double na = 0.0, nb = 0.0;
  for (double x : a_raw) na += x * x;
  for (double x : b_raw) nb += x * x;
  if (na < 1e-24 || nb < 1e-24) return -kInf;
  na = std::sqrt(na);
  nb = std::sqrt(nb);

  const int dim = basis_dim(n);
  std::vector<std::complex<double>> v(static_cast<size_t>(dim));
  const std::complex<double> phase{std::cos(eta), std::sin(eta)};
  const double a0 = a_raw[0] / na, b0 = b_raw[0] / nb;
  const double an = a_raw[static_cast<size_t>(n)] / na;
  const double bn = b_raw[static_cast<size_t>(n)] / nb;
  v[static_cast<size_t>(index_00(n))] = a0 * b0;
  for (int m = 1; m <= n; ++m) {
    v[static_cast<size_t>(index_m0(n, m))] = a_raw[static_cast<size_t>(m)] / na * b0;
    v[static_cast<size_t>(index_0m(n, m))] = a0 * b_raw[static_cast<size_t>(m)] / nb;
  }
  v[static_cast<size_t>(index_m0(n, n))] *= phase;
  v[static_cast<size_t>(index_nn(n))] = an * bn * phase;

  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    acc += b.at(i, i) * std::norm(v[static_cast<size_t>(i)]);
    for (int j = i + 1; j < dim; ++j) {
      const double bij = b.at(i, j);
      if (bij == 0.0) continue;
      acc += 2.0 * bij *
             (std::conj(v[static_cast<size_t>(i)]) * v[static_cast<size_t>(j)]).real();
    }
  }
  return acc;
}

}  // namespace

ExtremalityCertificate verify_extremality(const DampedNoonCoefficients& rho_c,
                                          const SeparableEdgeState& sigma_star,
                                          int n_starts, std::uint64_t seed) {
  rho_c.validate();
  sigma_star.validate();
  if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  const int n = rho_c.n_photons;
  const FockDensityMatrix rho = to_matrix(rho_c);
  const FockDensityMatrix sig = to_matrix(sigma_star);
  const FockDensityMatrix b = build_B_operator(rho, sig);

  ExtremalityCertificate cert;
  cert.n_starts = n_starts;
  double tr = 0.0;
  for (int i = 0; i < b.dim; ++i) {
    for (int j = 0; j < b.dim; ++j) tr += b.at(i, j) * sig.at(j, i);
  }
  cert.trace_b_sigma = tr;

  // Search variables: a_0..a_N, b_0..b_N, eta.
  const size_t nvar = 2 * static_cast<size_t>(n + 1) + 1;
  auto negative_overlap = [&](const std::vector<double>& x) -> double {
    std::vector<double> a(x.begin(), x.begin() + (n + 1));
    std::vector<double> bb(x.begin() + (n + 1), x.begin() + 2 * (n + 1));
    return -product_overlap(b, n, a, bb, x.back());
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);

  std::vector<std::vector<double>> starts;
  starts.reserve(static_cast<size_t>(n_starts));
  // Corner starts: all weight shared between |0> and |N> in both modes,
  // where the analytic maximum lives.
  const double kAngles[] = {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI / 2};
  for (double t1 : kAngles) {
    for (double t2 : kAngles) {
      for (double eta : {0.0, M_PI}) {
        if (static_cast<int>(starts.size()) >= n_starts) break;
        std::vector<double> x(nvar, 0.0);
        x[0] = std::cos(t1);
        x[static_cast<size_t>(n)] = std::sin(t1);
        x[static_cast<size_t>(n + 1)] = std::cos(t2);
        x[static_cast<size_t>(2 * n + 1)] = std::sin(t2);
        x.back() = eta;
        starts.push_back(std::move(x));
      }
    }
  }
  while (static_cast<int>(starts.size()) < n_starts) {
    std::vector<double> x(nvar);
    for (size_t i = 0; i + 1 < nvar; ++i) x[i] = gauss(rng);
    x.back() = uni(rng);
    starts.push_back(std::move(x));
  }

  double best = -kInf;
  std::vector<double> best_x;
  SimplexOptions opt;
  opt.f_tol = 1e-13;
  for (const auto& x0 : starts) {
    SimplexResult r = simplex_minimize(negative_overlap, x0, 0.2, opt);
    r = simplex_minimize(negative_overlap, r.x, 1e-3, opt);
    if (-r.f > best) {
      best = -r.f;
      best_x = r.x;
    }
  }

  // Fully complex randomized spot check (lower density, no refinement):
  // guards against off-pattern structure the reduced parametrization
  // could miss.
  const int dim = basis_dim(n);
  for (int k = 0; k < 64 * n_starts; ++k) {
    std::vector<std::complex<double>> alpha(static_cast<size_t>(n + 1));
    std::vector<std::complex<double>> beta(static_cast<size_t>(n + 1));
    double na = 0.0, nb = 0.0;
    for (int i = 0; i <= n; ++i) {
      alpha[static_cast<size_t>(i)] = {gauss(rng), gauss(rng)};
      beta[static_cast<size_t>(i)] = {gauss(rng), gauss(rng)};
      na += std::norm(alpha[static_cast<size_t>(i)]);
      nb += std::norm(beta[static_cast<size_t>(i)]);
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    std::vector<std::complex<double>> v(static_cast<size_t>(dim));
    v[static_cast<size_t>(index_00(n))] = alpha[0] / na * beta[0] / nb;
    for (int m = 1; m <= n; ++m) {
      v[static_cast<size_t>(index_m0(n, m))] =
          alpha[static_cast<size_t>(m)] / na * beta[0] / nb;
      v[static_cast<size_t>(index_0m(n, m))] =
          alpha[0] / na * beta[static_cast<size_t>(m)] / nb;
    }
    v[static_cast<size_t>(index_nn(n))] =
        alpha[static_cast<size_t>(n)] / na * beta[static_cast<size_t>(n)] / nb;
    double val = 0.0;
    for (int i = 0; i < dim; ++i) {
      val += b.at(i, i) * std::norm(v[static_cast<size_t>(i)]);
      for (int j = i + 1; j < dim; ++j) {
        if (b.at(i, j) == 0.0) continue;
        val += 2.0 * b.at(i, j) *
               (std::conj(v[static_cast<size_t>(i)]) * v[static_cast<size_t>(j)]).real();
      }
    }
    if (val > best) {
      best = val;
      best_x.assign(nvar, 0.0);
      for (int i = 0; i <= n; ++i) {
        best_x[static_cast<size_t>(i)] = std::abs(alpha[static_cast<size_t>(i)]) / na;
        best_x[static_cast<size_t>(n + 1 + i)] = std::abs(beta[static_cast<size_t>(i)]) / nb;
      }
      best_x.back() = 0.0;
    }
  }

  cert.max_product_overlap = best;
  if (!best_x.empty()) {
    double na = 0.0, nb = 0.0;
    for (int i = 0; i <= n; ++i) {
      na += best_x[static_cast<size_t>(i)] * best_x[static_cast<size_t>(i)];
      nb += best_x[static_cast<size_t>(n + 1 + i)] * best_x[static_cast<size_t>(n + 1 + i)];
    }
    const double a0 = best_x[0] / std::sqrt(na);
    const double an = best_x[static_cast<size_t>(n)] / std::sqrt(na);
    const double b0 = best_x[static_cast<size_t>(n + 1)] / std::sqrt(nb);
    const double bn = best_x[static_cast<size_t>(2 * n + 1)] / std::sqrt(nb);
    cert.k1 = a0 * a0 + an * an;
    cert.k2 = b0 * b0 + bn * bn;
    cert.theta1 = std::atan2(std::abs(an), std::abs(a0));
    cert.theta2 = std::atan2(std::abs(bn), std::abs(b0));
    double eta = std::fmod(best_x.back(), 2.0 * M_PI);
    if (eta < 0) eta += 2.0 * M_PI;
    cert.eta = eta;
  }
  cert.passed = cert.max_product_overlap <= 1.0 + kCertSlack &&
                std::abs(cert.trace_b_sigma - 1.0) <= kCertSlack;
  return cert;
}

}  // namespace dnoon
