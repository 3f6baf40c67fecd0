#pragma once

#include "dsm/common.hpp"
#include "dsm/forward_bie.hpp"
#include "dsm/geometry.hpp"

namespace dsm {

/// Physical-optics setup. The approximation is meaningful for convex
/// boundaries only; nothing here checks convexity.
struct KirchhoffConfig {
  ParametricBoundary boundary;
  double gamma_d = -2.0;  // -2 soft, +2 hard

  static KirchhoffConfig from_condition(const ParametricBoundary &b, const BoundaryCondition &bc);
};

/// gamma_D int_{illuminated} d/dnu e^{ik theta.y} e^{-ik xhat.y} ds by the
/// trapezoid rule over the illuminated nodes. Throws SolverError when the
/// node count violates the resolution guard.
Complex kirchhoff_far_field(const KirchhoffConfig &c, Vec2 xhat, Vec2 theta, double k);

/// -k^2 theta.(theta - xhat) gamma_D chi^(k (theta - xhat)), chi^ being the
/// Fourier transform of the indicator of the disk.
Complex bojarski_rhs_disk(Vec2 center, double radius, Vec2 xhat, Vec2 theta, double k, double gamma_d);

/// Same for the domain bounded by `b`; the area integral is turned into a
/// boundary integral of e^{ik d.y} (d.nu) / (ik |d|^2).
Complex bojarski_rhs(const ParametricBoundary &b, Vec2 xhat, Vec2 theta, double k, double gamma_d);

/// Leading high-frequency reflection coefficient for a circle, in the
/// physical amplitude normalisation:
///   gamma kappa^{-1/2} |theta - xhat|^{-1/2} phi.xhat,  phi = (xhat - theta)/|xhat - theta|
/// with gamma = -1 (soft) or +1 (hard).
double reflection_coefficient(double radius, BoundaryKind kind, Vec2 xhat, Vec2 theta);

/// Specular point on the circle for the pair: the point whose outward normal
/// is (xhat - theta) / |xhat - theta|.
Vec2 specular_point(Vec2 center, double radius, Vec2 xhat, Vec2 theta);

/// R e^{ik y.(theta - xhat)} at the specular point y, in the physical
/// amplitude normalisation (see to_physical_amplitude).
Complex majda_leading_amplitude(Vec2 center, double radius, BoundaryKind kind, Vec2 xhat, Vec2 theta, double k);

/// The same leading term expressed as a far field pattern
/// (divided by e^{i pi/4} / sqrt(8 pi k)).
Complex majda_leading_far_field(Vec2 center, double radius, BoundaryKind kind, Vec2 xhat, Vec2 theta, double k);

/// e^{i pi/4} / sqrt(8 pi k) * u_inf: the amplitude f with u_s ~ f e^{ikr} / sqrt(r).
Complex to_physical_amplitude(Complex far_field, double k);

}  // namespace dsm
