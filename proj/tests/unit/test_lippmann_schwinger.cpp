#include <gtest/gtest.h>

#include <cmath>

#include "dsm/forward_bie.hpp"
#include "dsm/forward_weak.hpp"

using namespace dsm;

namespace {

double relative_far_field_gap(const LsSolution &s, const MediumContrast &m, double q, int count) {
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < count; ++i) {
    const Vec2 xh = unit_from_angle(2.0 * kPi * i / count);
    const Complex mie = mie_far_field_penetrable(m.disk_radius(), m.disk_center(), q, xh, s.theta(), s.wavenumber());
    err = std::max(err, std::abs(s.far_field(xh) - mie));
    scale = std::max(scale, std::abs(mie));
  }
  return err / scale;
}

}  // namespace

TEST(LippmannSchwinger, ZeroContrastOperatorIsIdentity) {
  const LsRaster r = LsRaster::covering({-1, -1}, {1, 1}, 16);
  std::vector<Complex> u(256);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = Complex(std::sin(0.1 * i), std::cos(0.3 * i));
  const auto out = lippmann_schwinger_apply(r, 3.0, std::vector<double>(256, 0.0), u);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(out[i], u[i]);
}

TEST(LippmannSchwinger, OperatorMatchesDirectSum) {
  const int n = 8;
  const LsRaster r = LsRaster::covering({-0.5, -0.5}, {0.5, 0.5}, n);
  const double k = 2.0, h = r.cell;
  std::vector<double> c(n * n);
  std::vector<Complex> u(n * n);
  for (int i = 0; i < n * n; ++i) {
    c[i] = 0.1 + 0.01 * i;
    u[i] = Complex(1.0 + 0.1 * i, -0.05 * i);
  }
  const auto out = lippmann_schwinger_apply(r, k, c, u);
  const double a = h / std::sqrt(kPi);
  // Self cell: kernel integrated over the disk of equal area.
  const double j1 = std::cyl_bessel_j(1, k * a), y1 = std::cyl_neumann(1, k * a);
  const Complex self = kI * kPi * a / (2.0 * k) * Complex(j1, y1) - 1.0 / (k * k);
  for (int ti = 0; ti < n * n; ti += 7) {
    const Vec2 x = r.cells().center(ti % n, ti / n);
    Complex sum = 0.0;
    for (int s = 0; s < n * n; ++s) {
      if (s == ti) {
        sum += self * c[s] * u[s];
        continue;
      }
      const double d = norm(r.cells().center(s % n, s / n) - x);
      const Complex phi = 0.25 * kI * Complex(std::cyl_bessel_j(0, k * d), std::cyl_neumann(0, k * d));
      sum += h * h * phi * c[s] * u[s];
    }
    EXPECT_NEAR(std::abs(out[ti] - (u[ti] - k * k * sum)), 0.0, 1e-12);
  }
}

TEST(LippmannSchwinger, PenetrableDiskAgainstSeparationOfVariables) {
  const auto m = MediumContrast::disk({0.1, -0.2}, 0.8, 0.5);
  const LsRaster r = LsRaster::covering({-1.0, -1.2}, {1.2, 1.0}, 64);
  const LsSolution s = lippmann_schwinger_solve(m, 3.0, unit_from_angle(0.4), r);
  EXPECT_LT(s.residual(), 1e-9);
  EXPECT_LT(relative_far_field_gap(s, m, 1.5, 32), 1e-2);
}

TEST(LippmannSchwinger, ErrorDecreasesUnderRefinement) {
  const auto m = MediumContrast::disk({0.0, 0.0}, 1.0, 1.0);
  double previous = 1.0;
  for (int n : {32, 64, 128}) {
    const LsSolution s = lippmann_schwinger_solve(m, 2.0, {1.0, 0.0}, LsRaster::covering({-1.5, -1.5}, {1.5, 1.5}, n));
    const double gap = relative_far_field_gap(s, m, 2.0, 16);
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 5e-3);
}

TEST(LippmannSchwinger, WeakContrastApproachesBorn) {
  const auto m = MediumContrast::disk({0.0, 0.0}, 1.0, 0.01);
  const LsSolution s = lippmann_schwinger_solve(m, 2.0, {1.0, 0.0}, LsRaster::covering({-1.5, -1.5}, {1.5, 1.5}, 96));
  double gap = 0.0, scale = 0.0;
  for (int i = 0; i < 64; ++i) {
    const Vec2 xh = unit_from_angle(2.0 * kPi * i / 64);
    const Complex born = born_far_field(m, xh, {1.0, 0.0}, 2.0);
    gap = std::max(gap, std::abs(s.far_field(xh) - born));
    scale = std::max(scale, std::abs(born));
  }
  EXPECT_LT(gap, 0.05 * scale);
}

TEST(LippmannSchwinger, Guards) {
  const auto m = MediumContrast::disk({0.0, 0.0}, 1.0, 1.0);
  EXPECT_THROW(lippmann_schwinger_solve(m, 30.0, {1.0, 0.0}, LsRaster::covering({-1.5, -1.5}, {1.5, 1.5}, 32)),
               SolverError);
  EXPECT_THROW(lippmann_schwinger_solve(m, 1.0, {1.0, 0.0}, LsRaster::covering({-0.5, -0.5}, {0.5, 0.5}, 32)),
               DomainError);
  EXPECT_THROW(LsRaster::covering({0, 0}, {1, 1}, 1), DomainError);
}

TEST(LippmannSchwinger, KiteAgreesWithTransmissionBoundaryEquation) {
  const auto kite = ParametricBoundary::kite({0.0, 0.0}, 128);
  const auto m = MediumContrast::from_boundary(kite.with_nodes(512), 1.0, 0.02);
  const auto box = m.bounding_box();
  const LsRaster r = LsRaster::covering(box.first, box.second, 128);
  const Vec2 th = unit_from_angle(0.6);
  const LsSolution ls = lippmann_schwinger_solve(m, 4.0, th, r);
  const TransmissionSolution bie = solve_transmission(kite, 2.0, 4.0, std::span(&th, 1)).front();
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < 32; ++i) {
    const Vec2 xh = unit_from_angle(2.0 * kPi * i / 32);
    const Complex ref = far_field_from_traces(bie, xh);
    err = std::max(err, std::abs(ls.far_field(xh) - ref));
    scale = std::max(scale, std::abs(ref));
  }
  EXPECT_LT(err / scale, 1e-2);
}
