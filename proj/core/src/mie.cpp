#include <cmath>
#include <string>
#include <vector>

#include "dsm/forward_bie.hpp"
#include "dsm/specfun.hpp"

namespace dsm {
namespace {

int resolve_truncation(double kr, int truncation) {
  if (truncation < 0) return std::min(specfun::kMaxOrder, static_cast<int>(std::ceil(kr)) + 30);
  if (truncation < kr + 20.0 || truncation > specfun::kMaxOrder) {
    throw DomainError("series truncation " + std::to_string(truncation) + " outside [kr + 20, " +
                      std::to_string(specfun::kMaxOrder) + "]");
  }
  return truncation;
}

struct Cylinder {
  std::vector<double> j, y, dj, dy;
};

Cylinder cylinder_functions(int nmax, double x) {
  Cylinder c;
  const auto size = static_cast<std::size_t>(nmax + 1);
  c.j.resize(size);
  c.y.resize(size);
  specfun::bessel_jy_sequence(nmax, x, c.j, c.y);
  c.dj.resize(size);
  c.dy.resize(size);
  c.dj[0] = -c.j[1 % size];
  c.dy[0] = -c.y[1 % size];
  for (std::size_t n = 1; n < size; ++n) {
    c.dj[n] = c.j[n - 1] - static_cast<double>(n) / x * c.j[n];
    c.dy[n] = c.y[n - 1] - static_cast<double>(n) / x * c.y[n];
  }
  return c;
}

double angle_between(Vec2 xhat, Vec2 theta) { return std::atan2(cross(theta, xhat), dot(theta, xhat)); }

// -4i (a_0 + 2 sum_{n>=1} a_n cos(n phi)) times the translation phase.
Complex sum_series(const std::vector<Complex> &a, Vec2 center, Vec2 xhat, Vec2 theta, double k) {
  const double phi = angle_between(xhat, theta);
  Complex s = a[0];
  for (std::size_t n = 1; n < a.size(); ++n) s += 2.0 * a[n] * std::cos(static_cast<double>(n) * phi);
  return -4.0 * kI * s * cis(k * dot(theta - xhat, center));
}

}  // namespace

Complex mie_far_field_circle(double r, Vec2 center, const BoundaryCondition &bc, Vec2 xhat, Vec2 theta, double k,
                             int truncation) {
  if (!(r > 0.0) || !(k > 0.0)) throw DomainError("radius and wavenumber must be positive");
  const double x = k * r;
  const int nmax = resolve_truncation(x, truncation);
  const Cylinder c = cylinder_functions(nmax, x);
  std::vector<Complex> a(static_cast<std::size_t>(nmax + 1));
  for (std::size_t n = 0; n < a.size(); ++n) {
    const Complex h{c.j[n], c.y[n]};
    const Complex dh{c.dj[n], c.dy[n]};
    Complex num;
    Complex den;
    switch (bc.kind) {
      case BoundaryKind::soft:
        num = c.j[n];
        den = h;
        break;
      case BoundaryKind::hard:
        num = c.dj[n];
        den = dh;
        break;
      case BoundaryKind::impedance:
        num = k * c.dj[n] + kI * bc.lambda * c.j[n];
        den = k * dh + kI * bc.lambda * h;
        break;
    }
    a[n] = std::isfinite(std::abs(den)) ? -num / den : Complex{};
  }
  return sum_series(a, center, xhat, theta, k);
}

Complex mie_far_field_penetrable(double r, Vec2 center, double q, Vec2 xhat, Vec2 theta, double k, int truncation) {
  if (!(r > 0.0) || !(k > 0.0)) throw DomainError("radius and wavenumber must be positive");
  if (!(q > 0.0)) throw DomainError("refractive index must be positive");
  const double k1 = k * std::sqrt(q);
  const int nmax = resolve_truncation(std::max(k, k1) * r, truncation);
  const Cylinder out = cylinder_functions(nmax, k * r);
  const Cylinder in = cylinder_functions(nmax, k1 * r);
  std::vector<Complex> a(static_cast<std::size_t>(nmax + 1));
  for (std::size_t n = 0; n < a.size(); ++n) {
    const Complex h{out.j[n], out.y[n]};
    const Complex dh{out.dj[n], out.dy[n]};
    const Complex num = k1 * in.dj[n] * out.j[n] - k * in.j[n] * out.dj[n];
    const Complex den = k * in.j[n] * dh - k1 * in.dj[n] * h;
    a[n] = std::isfinite(std::abs(den)) ? num / den : Complex{};
  }
  return sum_series(a, center, xhat, theta, k);
}

}  // namespace dsm
