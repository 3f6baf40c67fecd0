#include "dsm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dsm::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kRescaleAbove = 1e200;
constexpr double kRescaleBy = 1e-200;
constexpr double kAsymptoticFrom = 25.0;
constexpr double kSeriesUpTo = 12.0;

void check_argument(int nmax, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel: argument must be positive and finite, got " + std::to_string(x));
  }
  if (nmax < 0 || nmax > kMaxOrder) {
    throw DomainError("bessel: order " + std::to_string(nmax) + " outside [0, " +
                      std::to_string(kMaxOrder) + "]");
  }
}

// Starting index for Miller's algorithm. Past the turning point n ~ x the
// functions decay like an Airy tail of width x^{1/3}; 14 widths plus a margin
// puts the truncation error below double precision.
int miller_start(int nmax, double x) {
  const double top = std::max(static_cast<double>(nmax), x);
  int m = static_cast<int>(std::ceil(top + 14.0 * std::cbrt(std::max(top, 1.0)) + 30.0));
  return m + (m & 1);
}

// J_0..J_m at x via downward recurrence and the Neumann normalisation.
std::vector<double> miller_j(int m, double x) {
  std::vector<double> j(static_cast<std::size_t>(m) + 1, 0.0);
  double next = 0.0;  // J_{n+1}
  double cur = 1e-30;  // J_n
  j[m] = cur;
  double even_sum = 0.0;
  for (int n = m; n >= 1; --n) {
    const double prev = (2.0 * n / x) * cur - next;
    next = cur;
    cur = prev;
    j[n - 1] = cur;
    if ((n - 1) % 2 == 0 && n - 1 > 0) even_sum += 2.0 * cur;
    if (std::abs(cur) > kRescaleAbove) {
      for (int i = n - 1; i <= m; ++i) j[i] *= kRescaleBy;
      next *= kRescaleBy;
      cur *= kRescaleBy;
      even_sum *= kRescaleBy;
    }
  }
  const double scale = 1.0 / (j[0] + even_sum);
  for (double &v : j) v *= scale;
  return j;
}

// p + iq = H0'(x)/H0(x) by Steed's continued fraction (modified Lentz).
Complex hankel_log_derivative0(double x) {
  const double tiny = 1e-300;
  // f = b0 + a1/(b1 + a2/(b2 + ...)) with b0 = 0 handled by starting at 1.
  Complex f = tiny;
  Complex c = f;
  Complex d = 0.0;
  for (int j = 1; j < 100000; ++j) {
    const double a = (j - 0.5) * (j - 0.5);
    const Complex b{2.0 * x, 2.0 * j};
    d = b + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  // For nu = 0 the first partial numerator is (1/2)^2 and belongs to the
  // fraction itself, so f already holds the full tail.
  return Complex{-0.5 / x, 1.0} + (kI / x) * f;
}

// Y_0, Y_1 from the J sequence.
std::pair<double, double> neumann_y01(const std::vector<double> &j, double x) {
  const double log_term = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  const int kmax = (static_cast<int>(j.size()) - 2) / 2;
  for (int k = kmax; k >= 1; --k) {  // small terms first
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  const double y0 = (2.0 / kPi) * (log_term * j[0] - 2.0 * s0);
  const double y1 = -(2.0 / kPi) * (j[0] / x - log_term * j[1] - s1);
  return {y0, y1};
}

std::pair<double, double> steed_y01(double j0, double j1, double x) {
  const Complex pq = hankel_log_derivative0(x);
  const double p = pq.real();
  const double q = pq.imag();
  const double y0 = (p * j0 + j1) / q;
  const double y1 = -(q * j0 + p * y0);
  return {y0, y1};
}

BesselJY01 hankel_asymptotic01(double x) {
  BesselJY01 out{};
  for (int nu = 0; nu <= 1; ++nu) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
      const double mag = std::abs(term);
      if (mag > last) break;  // past the optimal truncation point
      last = mag;
      // k odd contributes to Q with sign (-1)^{(k-1)/2}, k even to P with (-1)^{k/2}.
      if (k % 2 == 1) {
        q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
      } else {
        p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
      }
      if (mag < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    const double amp = std::sqrt(2.0 / (kPi * x));
    const double c = std::cos(chi);
    const double s = std::sin(chi);
    const double jv = amp * (p * c - q * s);
    const double yv = amp * (p * s + q * c);
    if (nu == 0) {
      out.j0 = jv;
      out.y0 = yv;
    } else {
      out.j1 = jv;
      out.y1 = yv;
    }
  }
  return out;
}

}  // namespace

void bessel_jy_sequence(int nmax, double x, std::span<double> j, std::span<double> y) {
  check_argument(nmax, x);
  if (j.size() < static_cast<std::size_t>(nmax) + 1 || y.size() < static_cast<std::size_t>(nmax) + 1) {
    throw DomainError("bessel_jy_sequence: output spans too short");
  }
  const std::vector<double> jall = miller_j(miller_start(nmax, x), x);
  const auto [y0, y1] = x <= kSeriesUpTo ? neumann_y01(jall, x) : steed_y01(jall[0], jall[1], x);

  std::copy_n(jall.begin(), nmax + 1, j.begin());
  y[0] = y0;
  if (nmax >= 1) y[1] = y1;
  for (int n = 1; n < nmax; ++n) {
    y[n + 1] = std::isinf(y[n]) ? y[n] : (2.0 * n / x) * y[n] - y[n - 1];
  }
}

CylinderFunctionValue bessel_jy(int order, double x) {
  check_argument(order, x);
  const int nmax = std::max(order, 1);
  std::vector<double> j(nmax + 1);
  std::vector<double> y(nmax + 1);
  bessel_jy_sequence(nmax, x, j, y);
  return {order, x, j[order], y[order], Complex{j[order], y[order]}};
}

std::vector<Complex> hankel1_sequence(int nmax, double x) {
  std::vector<double> j(static_cast<std::size_t>(nmax) + 1);
  std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
  bessel_jy_sequence(nmax, x, j, y);
  std::vector<Complex> h(j.size());
  for (std::size_t n = 0; n < h.size(); ++n) h[n] = {j[n], y[n]};
  return h;
}

BesselJY01 bessel_jy01(double x) {
  check_argument(1, x);
  if (x >= kAsymptoticFrom) return hankel_asymptotic01(x);
  double j[2];
  double y[2];
  bessel_jy_sequence(1, x, j, y);
  return {j[0], y[0], j[1], y[1]};
}

std::pair<double, double> bessel_j01(double x) {
  check_argument(1, x);
  if (x >= kAsymptoticFrom) {
    const BesselJY01 v = hankel_asymptotic01(x);
    return {v.j0, v.j1};
  }
  const std::vector<double> jall = miller_j(miller_start(1, x), x);
  return {jall[0], jall[1]};
}

Complex fundamental_solution(double k, Vec2 x, Vec2 y) {
  if (!(k > 0.0)) throw DomainError("fundamental_solution: wavenumber must be positive");
  const double r = norm(x - y);
  if (r < 1e-14) throw DomainError("fundamental_solution: source and target coincide");
  const BesselJY01 v = bessel_jy01(k * r);
  return 0.25 * kI * v.h0();
}

}  // namespace dsm::specfun
