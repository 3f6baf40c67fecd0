#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace dsm::detail {

using CVec = std::vector<std::complex<double>>;

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

inline Eigen::Map<const Eigen::VectorXcd> view(const CVec &v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}
inline Eigen::Map<Eigen::VectorXcd> view(CVec &v) { return {v.data(), static_cast<Eigen::Index>(v.size())}; }

inline double norm2(const CVec &v) { return view(v).norm(); }

inline std::complex<double> inner(const CVec &a, const CVec &b) { return view(a).dot(view(b)); }  // a^H b

/// Restarted GMRES(m) for A x = b with a matrix-free operator. `x` holds the
/// initial guess on entry and the solution on exit.
inline GmresResult gmres(const std::function<CVec(const CVec &)> &apply, const CVec &b, CVec &x, double tol,
                         int restart, int max_iterations) {
  using C = std::complex<double>;
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  GmresResult result;
  if (bnorm == 0.0) {
    x.assign(n, C{});
    result.converged = true;
    return result;
  }
  while (result.iterations < max_iterations) {
    CVec r = apply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm2(r);
    result.relative_residual = beta / bnorm;
    if (result.relative_residual <= tol) {
      result.converged = true;
      return result;
    }
    const int m = restart;
    std::vector<CVec> v(static_cast<std::size_t>(m) + 1);
    std::vector<std::vector<C>> h(static_cast<std::size_t>(m) + 1, std::vector<C>(static_cast<std::size_t>(m), C{}));
    std::vector<C> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
    std::vector<C> g(static_cast<std::size_t>(m) + 1, C{});
    v[0] = r;
    view(v[0]) /= beta;
    g[0] = beta;
    int used = 0;
    for (int j = 0; j < m && result.iterations < max_iterations; ++j) {
      ++result.iterations;
      CVec w = apply(v[j]);
      for (int i = 0; i <= j; ++i) {
        const C hij = inner(v[i], w);
        h[i][j] = hij;
        view(w) -= hij * view(v[i]);
      }
      const double hnext = norm2(w);
      h[j + 1][j] = hnext;
      if (hnext > 0.0) {
        v[j + 1] = w;
        view(v[j + 1]) /= hnext;
      }
      for (int i = 0; i < j; ++i) {  // previous rotations
        const C tmp = std::conj(cs[i]) * h[i][j] + std::conj(sn[i]) * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = tmp;
      }
      const double denom = std::sqrt(std::norm(h[j][j]) + std::norm(h[j + 1][j]));
      cs[j] = h[j][j] / denom;
      sn[j] = h[j + 1][j] / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = std::conj(cs[j]) * g[j];
      used = j + 1;
      result.relative_residual = std::abs(g[j + 1]) / bnorm;
      if (result.relative_residual <= tol || hnext == 0.0) break;
    }
    // Back substitution and update.
    std::vector<C> y(static_cast<std::size_t>(used));
    for (int i = used - 1; i >= 0; --i) {
      C s = g[i];
      for (int q = i + 1; q < used; ++q) s -= h[i][q] * y[q];
      y[i] = s / h[i][i];
    }
    for (int i = 0; i < used; ++i) view(x) += y[static_cast<std::size_t>(i)] * view(v[static_cast<std::size_t>(i)]);
  }
  CVec r = apply(x);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  result.relative_residual = norm2(r) / bnorm;
  result.converged = result.relative_residual <= tol;
  return result;
}

}  // namespace dsm::detail
