#include "dsm/forward_kirchhoff.hpp"

#include <cmath>
#include <string>

#include "dsm/forward_weak.hpp"

namespace dsm {
namespace {

constexpr double kDegenerateTol = 1e-12;

void check_pair(Vec2 xhat, Vec2 theta) {
  if (norm(theta - xhat) <= kDegenerateTol) throw DomainError("degenerate pair: xhat == theta");
}

void check_resolution(const ParametricBoundary &b, double k) {
  const int needed = minimum_boundary_nodes(b, k);
  if (b.node_count() < needed) {
    throw SolverError("kirchhoff: " + std::to_string(b.node_count()) + " nodes under-resolve k = " +
                      std::to_string(k) + " (need at least " + std::to_string(needed) + ")");
  }
}

}  // namespace

KirchhoffConfig KirchhoffConfig::from_condition(const ParametricBoundary &b, const BoundaryCondition &bc) {
  return {b, bc.gamma_d()};
}

Complex kirchhoff_far_field(const KirchhoffConfig &c, Vec2 xhat, Vec2 theta, double k) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  check_resolution(c.boundary, k);
  const std::vector<BoundaryNode> nodes = boundary_sample(c.boundary);
  const IlluminatedPartition part = illuminated_partition(nodes, theta);
  const Vec2 d = theta - xhat;
  Complex sum = 0.0;
  for (std::size_t i : part.illuminated) {
    const BoundaryNode &nd = nodes[i];
    sum += dot(theta, nd.normal) * cis(k * dot(d, nd.point)) * nd.jacobian;
  }
  return c.gamma_d * kI * k * sum * (2.0 * kPi / static_cast<double>(nodes.size()));
}

Complex bojarski_rhs_disk(Vec2 center, double radius, Vec2 xhat, Vec2 theta, double k, double gamma_d) {
  check_pair(xhat, theta);
  const Vec2 d = theta - xhat;
  return -k * k * dot(theta, d) * gamma_d * disk_fourier_transform(center, radius, d, k);
}

Complex bojarski_rhs(const ParametricBoundary &b, Vec2 xhat, Vec2 theta, double k, double gamma_d) {
  check_pair(xhat, theta);
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  const Vec2 d = theta - xhat;
  const double d2 = dot(d, d);
  const std::vector<BoundaryNode> nodes = boundary_sample(b);
  Complex sum = 0.0;
  for (const BoundaryNode &nd : nodes) sum += cis(k * dot(d, nd.point)) * dot(d, nd.normal) * nd.jacobian;
  const Complex chi = sum * (2.0 * kPi / static_cast<double>(nodes.size())) / (kI * k * d2);
  return -k * k * dot(theta, d) * gamma_d * chi;
}

double reflection_coefficient(double radius, BoundaryKind kind, Vec2 xhat, Vec2 theta) {
  check_pair(xhat, theta);
  if (kind == BoundaryKind::impedance) throw DomainError("reflection coefficient needs a soft or hard circle");
  const double gamma = kind == BoundaryKind::soft ? -1.0 : 1.0;
  const Vec2 d = xhat - theta;
  const Vec2 phi = normalized(d);
  return gamma * std::sqrt(radius) / std::sqrt(norm(d)) * dot(phi, xhat);
}

Vec2 specular_point(Vec2 center, double radius, Vec2 xhat, Vec2 theta) {
  check_pair(xhat, theta);
  return center + radius * normalized(xhat - theta);
}

Complex majda_leading_amplitude(Vec2 center, double radius, BoundaryKind kind, Vec2 xhat, Vec2 theta, double k) {
  const double r = reflection_coefficient(radius, kind, xhat, theta);
  const Vec2 y = specular_point(center, radius, xhat, theta);
  return r * cis(k * dot(y, theta - xhat));
}

Complex majda_leading_far_field(Vec2 center, double radius, BoundaryKind kind, Vec2 xhat, Vec2 theta, double k) {
  return majda_leading_amplitude(center, radius, kind, xhat, theta, k) / to_physical_amplitude(1.0, k);
}

Complex to_physical_amplitude(Complex far_field, double k) {
  return far_field * cis(0.25 * kPi) / std::sqrt(8.0 * kPi * k);
}

}  // namespace dsm
