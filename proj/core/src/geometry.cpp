#include "dsm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dsm {
namespace {

constexpr double kDegenerateTol = 1e-12;

bool is_unit(Vec2 v) { return std::abs(norm(v) - 1.0) <= 1e-12; }

void check_nodes(int nodes) {
  if (nodes < 4 || nodes % 2 != 0) {
    throw DomainError("boundary node count must be even and >= 4, got " + std::to_string(nodes));
  }
}

}  // namespace

ParametricBoundary::ParametricBoundary(BoundaryShape shape, Vec2 center, double radius, int nodes)
    : shape_(shape), center_(center), radius_(radius), nodes_(nodes) {
  check_nodes(nodes);
  if (shape == BoundaryShape::circle && !(radius > 0.0)) {
    throw DomainError("circle radius must be positive");
  }
}

ParametricBoundary ParametricBoundary::kite(Vec2 center, int nodes) {
  return {BoundaryShape::kite, center, 0.0, nodes};
}

ParametricBoundary ParametricBoundary::circle(Vec2 center, double radius, int nodes) {
  return {BoundaryShape::circle, center, radius, nodes};
}

ParametricBoundary ParametricBoundary::with_nodes(int nodes) const {
  return {shape_, center_, radius_, nodes};
}

Vec2 ParametricBoundary::point(double t) const {
  if (shape_ == BoundaryShape::circle) {
    return center_ + radius_ * Vec2{std::cos(t), std::sin(t)};
  }
  return center_ + Vec2{std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t)};
}

Vec2 ParametricBoundary::tangent(double t) const {
  if (shape_ == BoundaryShape::circle) {
    return radius_ * Vec2{-std::sin(t), std::cos(t)};
  }
  return {-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t)};
}

Vec2 ParametricBoundary::second_derivative(double t) const {
  if (shape_ == BoundaryShape::circle) {
    return radius_ * Vec2{-std::cos(t), -std::sin(t)};
  }
  return {-std::cos(t) - 2.6 * std::cos(2.0 * t), -1.5 * std::sin(t)};
}

Vec2 ParametricBoundary::normal(double t) const {
  const Vec2 d = tangent(t);
  const double len = norm(d);
  return {d.y / len, -d.x / len};
}

double ParametricBoundary::curvature(double t) const {
  if (shape_ == BoundaryShape::circle) return 1.0 / radius_;
  const Vec2 d1 = tangent(t);
  const Vec2 d2 = second_derivative(t);
  const double len = norm(d1);
  return cross(d1, d2) / (len * len * len);
}

double ParametricBoundary::perimeter() const {
  double sum = 0.0;
  for (int i = 0; i < nodes_; ++i) sum += norm(tangent(2.0 * kPi * i / nodes_));
  return sum * 2.0 * kPi / nodes_;
}

double ParametricBoundary::bounding_radius() const {
  if (shape_ == BoundaryShape::circle) return radius_;
  double r = 0.0;
  for (int i = 0; i < 2048; ++i) r = std::max(r, norm(point(2.0 * kPi * i / 2048) - center_));
  return 1.001 * r;
}

bool ParametricBoundary::contains(Vec2 p) const {
  // Ray casting on a fine polygon.
  const int n = std::max(nodes_, 512);
  bool inside = false;
  Vec2 a = point(0.0);
  for (int i = 1; i <= n; ++i) {
    const Vec2 b = point(2.0 * kPi * i / n);
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xcross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xcross) inside = !inside;
    }
    a = b;
  }
  return inside;
}

std::vector<BoundaryNode> boundary_sample(const ParametricBoundary &b) {
  const int n = b.node_count();
  std::vector<BoundaryNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    nodes.push_back({t, b.point(t), b.normal(t), norm(b.tangent(t))});
  }
  return nodes;
}

std::vector<Vec2> equispaced_directions(int count) {
  if (count < 1) throw DomainError("direction count must be at least 1");
  std::vector<Vec2> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) dirs.push_back(unit_from_angle(2.0 * kPi * m / count));
  return dirs;
}

bool Mat2::is_orthogonal(double tol) const {
  // Q^T Q == I
  const double b11 = a11 * a11 + a21 * a21;
  const double b12 = a11 * a12 + a21 * a22;
  const double b22 = a12 * a12 + a22 * a22;
  return std::abs(b11 - 1.0) <= tol && std::abs(b12) <= tol && std::abs(b22 - 1.0) <= tol;
}

DirectionPairSet make_direction_pairs(int variant, int count, std::optional<Mat2> rotation,
                                      std::optional<Vec2> fixed_theta) {
  const std::vector<Vec2> dirs = equispaced_directions(count);
  return make_direction_pairs(variant, dirs, rotation, fixed_theta);
}

DirectionPairSet make_direction_pairs(int variant, std::span<const Vec2> directions,
                                      std::optional<Mat2> rotation, std::optional<Vec2> fixed_theta) {
  if (variant < 1 || variant > 3) throw DomainError("direction set variant must be 1, 2 or 3");
  if (directions.empty()) throw DomainError("direction set is empty");
  for (Vec2 d : directions) {
    if (!is_unit(d)) throw DomainError("direction set contains a non-unit vector");
  }
  DirectionPairSet set;
  set.variant = variant;
  set.directions.assign(directions.begin(), directions.end());

  std::vector<DirectionPair> candidates;
  switch (variant) {
    case 1:
      for (Vec2 theta : directions) candidates.push_back({-theta, theta});
      break;
    case 2:
      if (!rotation) throw DomainError("variant 2 requires a rotation Q");
      if (!rotation->is_orthogonal()) throw DomainError("rotation Q is not orthogonal");
      set.rotation = rotation;
      for (Vec2 theta : directions) candidates.push_back({(*rotation) * theta, theta});
      break;
    case 3:
      if (!fixed_theta) throw DomainError("variant 3 requires a fixed incident direction");
      if (!is_unit(*fixed_theta)) throw DomainError("fixed incident direction is not a unit vector");
      set.fixed_theta = fixed_theta;
      for (Vec2 xhat : directions) candidates.push_back({xhat, *fixed_theta});
      break;
  }
  for (const DirectionPair &p : candidates) {
    if (norm(p.xhat - p.theta) <= kDegenerateTol) {
      ++set.dropped_degenerate;
    } else {
      set.pairs.push_back(p);
    }
  }
  return set;
}

DirectionPairSet make_explicit_pairs(int variant, std::span<const DirectionPair> pairs) {
  if (variant < 1 || variant > 3) throw DomainError("direction set variant must be 1, 2 or 3");
  DirectionPairSet set;
  set.variant = variant;
  for (const DirectionPair &p : pairs) {
    if (!is_unit(p.xhat) || !is_unit(p.theta)) throw DomainError("pair contains a non-unit vector");
    if (norm(p.xhat - p.theta) <= kDegenerateTol) {
      ++set.dropped_degenerate;
    } else {
      set.pairs.push_back(p);
    }
  }
  return set;
}

std::vector<Vec2> directions_in_arc(std::span<const Vec2> directions, double from, double to) {
  constexpr double tol = 1e-12;
  std::vector<Vec2> out;
  for (Vec2 d : directions) {
    double a = std::atan2(d.y, d.x);
    // Bring the angle to the first representative >= from - tol.
    while (a < from - tol) a += 2.0 * kPi;
    while (a - 2.0 * kPi >= from - tol) a -= 2.0 * kPi;
    if (a <= to + tol) out.push_back(d);
  }
  return out;
}

SamplingGrid::SamplingGrid(Vec2 corner_, double spacing_, int nx_, int ny_)
    : corner(corner_), spacing(spacing_), nx(nx_), ny(ny_) {
  if (!(spacing > 0.0)) throw DomainError("grid spacing must be positive");
  if (nx < 1 || ny < 1) throw DomainError("grid dimensions must be positive");
}

bool Strip::contains(Vec2 y, double tol) const {
  const double s = dot(y, normal);
  return s >= lower - tol && s <= upper + tol;
}

double Strip::distance(Vec2 z) const {
  const double s = dot(z, normal);
  return std::max({0.0, lower - s, s - upper});
}

bool Strip::contains(const Strip &inner, double tol) const {
  return inner.lower >= lower - tol && inner.upper <= upper + tol;
}

Strip strip_hull(const ParametricBoundary &b, Vec2 normal) {
  // Extremes of the support function x(t) . phi: coarse scan, then Newton
  // on d/dt x(t) . phi = 0 from the best samples.
  const Vec2 phi = normalized(normal);
  constexpr int kScan = 1024;
  int imin = 0, imax = 0;
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  for (int i = 0; i < kScan; ++i) {
    const double s = dot(b.point(2.0 * kPi * i / kScan), phi);
    if (s < smin) smin = s, imin = i;
    if (s > smax) smax = s, imax = i;
  }
  auto polish = [&](int i, double best, bool upper) {
    double t = 2.0 * kPi * i / kScan;
    for (int it = 0; it < 20; ++it) {
      const double d1 = dot(b.tangent(t), phi), d2 = dot(b.second_derivative(t), phi);
      if (d2 == 0.0) break;
      const double step = d1 / d2;
      t -= std::clamp(step, -kPi / kScan, kPi / kScan);
      if (std::abs(step) < 1e-15) break;
    }
    const double s = dot(b.point(t), phi);
    return upper ? std::max(best, s) : std::min(best, s);
  };
  return {phi, polish(imin, smin, false), polish(imax, smax, true)};
}

Strip strip_hull(std::span<const Vec2> points, Vec2 normal) {
  if (points.empty()) throw DomainError("strip_hull: empty geometry");
  const Vec2 phi = normalized(normal);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Vec2 p : points) {
    const double s = dot(p, phi);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {phi, lo, hi};
}

IlluminatedPartition illuminated_partition(std::span<const BoundaryNode> nodes, Vec2 theta) {
  IlluminatedPartition part;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    // Terminator nodes (nu . theta == 0 up to rounding) belong to the shadow.
    if (dot(nodes[i].normal, theta) < -1e-12) {
      part.illuminated.push_back(i);
    } else {
      part.shadow.push_back(i);
    }
  }
  return part;
}

}  // namespace dsm
