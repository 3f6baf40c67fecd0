#pragma once

#include <span>
#include <vector>

#include "dsm/common.hpp"

// Integer-order cylinder functions and the 2D Helmholtz fundamental solution.
//
// J_n is obtained by Miller's downward recurrence normalised with
// J_0 + 2 sum J_2k = 1. Y_0, Y_1 come from the Neumann series in J_2k for
// x <= 12 and from Steed's continued fraction for H'_0/H_0 above that;
// higher Y_n follow by upward recurrence.

namespace dsm::specfun {

inline constexpr int kMaxOrder = 120;

struct CylinderFunctionValue {
  int order = 0;
  double argument = 0.0;
  double j = 0.0;
  double y = 0.0;
  Complex h1;  // j + i y
};

/// J_n(x), Y_n(x) for a single order. Throws DomainError for x <= 0 or an
/// order outside [0, kMaxOrder]. Y_n overflows to -inf for very small x at
/// high order, as the true value does.
CylinderFunctionValue bessel_jy(int order, double x);

/// J_0..J_nmax and Y_0..Y_nmax at x. Both spans must hold nmax + 1 values.
void bessel_jy_sequence(int nmax, double x, std::span<double> j, std::span<double> y);

/// Convenience wrapper returning H^(1)_0..H^(1)_nmax.
std::vector<Complex> hankel1_sequence(int nmax, double x);

struct BesselJY01 {
  double j0, y0, j1, y1;
  Complex h0() const { return {j0, y0}; }
  Complex h1() const { return {j1, y1}; }
};

/// Orders 0 and 1 together. Uses the Hankel asymptotic expansion for x >= 25
/// (error below e^{-2x}) and the general sequence otherwise. This is the hot
/// path of every kernel assembly.
BesselJY01 bessel_jy01(double x);

/// J_0(x) and J_1(x) only; cheaper than bessel_jy01 for x < 25.
std::pair<double, double> bessel_j01(double x);

/// Phi_k(x, y) = (i/4) H_0^(1)(k |x - y|). Throws DomainError when the points
/// coincide (|x - y| < 1e-14) or k <= 0.
Complex fundamental_solution(double k, Vec2 x, Vec2 y);

}  // namespace dsm::specfun
