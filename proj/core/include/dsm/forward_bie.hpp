#pragma once

#include <span>
#include <vector>

#include "dsm/common.hpp"
#include "dsm/geometry.hpp"

namespace dsm {

enum class BoundaryKind { soft, hard, impedance };

/// Boundary condition on the obstacle: u = 0 (soft), du/dnu = 0 (hard) or
/// du/dnu + i lambda u = 0 (impedance).
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::soft;
  double lambda = 0.0;

  static BoundaryCondition soft() { return {BoundaryKind::soft, 0.0}; }
  static BoundaryCondition hard() { return {BoundaryKind::hard, 0.0}; }
  static BoundaryCondition impedance(double lambda);

  /// -2 for soft, +2 for hard. Throws DomainError for impedance.
  double gamma_d() const;
};

/// Exterior solution for one plane wave, sampled at the boundary nodes.
struct BoundarySolution {
  ParametricBoundary boundary;
  BoundaryCondition condition;
  double k = 0.0;
  Vec2 theta;
  std::vector<BoundaryNode> nodes;
  std::vector<Complex> density;  // soft: layer density psi; otherwise equal to u
  std::vector<Complex> u;  // total field trace
  std::vector<Complex> dudn;  // total normal derivative trace
  double equation_residual = 0.0;  // relative residual of the discrete system
  double rcond = 0.0;  // reciprocal condition estimate of the system matrix
};

/// Smallest admissible node count for wavenumber k: N >= 10 k L / (2 pi).
int minimum_boundary_nodes(const ParametricBoundary &b, double k);

/// Nystrom solution for the plane wave exp(i k x . theta).
///   soft: combined layer u_s = (D - i k S) psi, second kind equation
///   hard, impedance: Burton-Miller combination of the direct equations for
///   the total trace, hypersingular part written as d/ds S d/ds + k^2 nu.S nu
/// Logarithmic kernel singularities use the periodic product quadrature.
/// Throws SolverError when the node count violates the resolution guard or
/// the system is numerically singular.
BoundarySolution solve_obstacle(const ParametricBoundary &b, const BoundaryCondition &bc, double k, Vec2 theta);

/// Same system for several incident directions; the matrix is factored once.
std::vector<BoundarySolution> solve_obstacle(const ParametricBoundary &b, const BoundaryCondition &bc, double k,
                                             std::span<const Vec2> thetas);

/// u_inf(xhat) = int { u d/dnu e^{-ik xhat.y} - du/dnu e^{-ik xhat.y} } ds
/// by the trapezoid rule on the solution nodes.
Complex far_field_from_traces(const BoundarySolution &sol, Vec2 xhat);

/// Same quadrature for arbitrary node traces (used to check normalisation).
Complex far_field_from_traces(std::span<const BoundaryNode> nodes, std::span<const Complex> u,
                              std::span<const Complex> dudn, double k, Vec2 xhat);

/// Total field at an arbitrary boundary parameter t of a soft solution,
/// evaluated from the layer potentials with the density interpolated
/// trigonometrically. Vanishes up to discretisation error.
Complex soft_boundary_field(const BoundarySolution &sol, double t);

/// Boundary traces of the total field for a homogeneous penetrable body with
/// refractive index q inside the curve and 1 outside.
struct TransmissionSolution {
  ParametricBoundary boundary;
  double q = 1.0;
  double k = 0.0;
  Vec2 theta;
  std::vector<BoundaryNode> nodes;
  std::vector<Complex> u;
  std::vector<Complex> dudn;
  double equation_residual = 0.0;
  double rcond = 0.0;
};

/// Direct second kind transmission system in the total traces (u, du/dnu),
/// with k0 = k outside and k1 = k sqrt(q) inside:
///   (I - K0 + K1) u + (S0 - S1) du/dnu = u_i
///   -(T0 - T1) u + (I + K0' - K1') du/dnu = du_i/dnu
/// The resolution guard applies at max(k0, k1). Throws SolverError when it is
/// violated or the system is numerically singular.
std::vector<TransmissionSolution> solve_transmission(const ParametricBoundary &b, double q, double k,
                                                     std::span<const Vec2> thetas);

Complex far_field_from_traces(const TransmissionSolution &sol, Vec2 xhat);

/// Separation of variables for a circle of radius r centred at `center`:
///   u_inf = -4i sum_n a_n e^{i n (angle(xhat) - angle(theta))}
///   soft       a_n = -J_n(kr) / H_n(kr)
///   hard       a_n = -J_n'(kr) / H_n'(kr)
///   impedance  a_n = -(k J_n' + i lambda J_n) / (k H_n' + i lambda H_n)
/// Terms |n| <= truncation; truncation must satisfy kr + 20 <= truncation <= 120.
/// A negative truncation selects min(120, ceil(kr) + 30).
Complex mie_far_field_circle(double r, Vec2 center, const BoundaryCondition &bc, Vec2 xhat, Vec2 theta, double k,
                             int truncation = -1);

/// Penetrable disk with refractive index q (interior wavenumber k sqrt(q)).
Complex mie_far_field_penetrable(double r, Vec2 center, double q, Vec2 xhat, Vec2 theta, double k,
                                 int truncation = -1);

}  // namespace dsm
