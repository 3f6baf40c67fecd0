#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dsm/common.hpp"

namespace dsm {

enum class BoundaryShape { kite, circle };

/// Closed parametric curve x(t), t in [0, 2pi), counter-clockwise.
///   kite:   center + (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
///   circle: center + r (cos t, sin t)
class ParametricBoundary {
 public:
  static ParametricBoundary kite(Vec2 center, int nodes);
  static ParametricBoundary circle(Vec2 center, double radius, int nodes);

  BoundaryShape shape() const { return shape_; }
  Vec2 center() const { return center_; }
  double radius() const { return radius_; }
  int node_count() const { return nodes_; }

  /// Same curve with a different node count.
  ParametricBoundary with_nodes(int nodes) const;

  Vec2 point(double t) const;
  Vec2 tangent(double t) const;  // x'(t)
  Vec2 second_derivative(double t) const;  // x''(t)
  Vec2 normal(double t) const;  // outward unit normal
  double curvature(double t) const;

  /// Length of the curve by trapezoid rule on `nodes` points (spectral).
  double perimeter() const;

  /// Upper bound of |x - center| over the curve.
  double bounding_radius() const;

  /// Point-in-domain test (winding angle on the sampled polygon).
  bool contains(Vec2 p) const;

 private:
  ParametricBoundary(BoundaryShape shape, Vec2 center, double radius, int nodes);

  BoundaryShape shape_;
  Vec2 center_;
  double radius_;
  int nodes_;
};

struct BoundaryNode {
  double t;
  Vec2 point;
  Vec2 normal;
  double jacobian;  // |x'(t)|
};

/// Nodes at t_i = 2 pi i / N.
std::vector<BoundaryNode> boundary_sample(const ParametricBoundary &b);

/// Equispaced directions (cos(2 pi m / l), sin(2 pi m / l)), m = 0..l-1.
std::vector<Vec2> equispaced_directions(int count);

/// 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  bool is_orthogonal(double tol = 1e-12) const;
};

/// An (observation, incidence) direction pair.
struct DirectionPair {
  Vec2 xhat;
  Vec2 theta;

  /// theta - xhat
  Vec2 phase_vector() const { return theta - xhat; }
  /// (theta - xhat) / |theta - xhat|
  Vec2 strip_normal() const { return normalized(phase_vector()); }
  DirectionPair mirrored() const { return {-xhat, -theta}; }
};

/// Backscattering data layouts:
///   1: xhat = -theta for theta in the direction set
///   2: xhat = Q theta for theta in the direction set
///   3: fixed theta, xhat ranging over the direction set
/// Pairs built explicitly (restricted apertures) are tagged variant 3 when
/// they mix several incident directions.
struct DirectionPairSet {
  int variant = 1;
  std::vector<Vec2> directions;
  std::optional<Mat2> rotation;
  std::optional<Vec2> fixed_theta;
  std::vector<DirectionPair> pairs;
  int dropped_degenerate = 0;
};

DirectionPairSet make_direction_pairs(int variant, int count, std::optional<Mat2> rotation = {},
                                      std::optional<Vec2> fixed_theta = {});

/// Same as above over an explicit direction set.
DirectionPairSet make_direction_pairs(int variant, std::span<const Vec2> directions,
                                      std::optional<Mat2> rotation = {},
                                      std::optional<Vec2> fixed_theta = {});

/// Explicit pair list; degenerate pairs are dropped and counted.
DirectionPairSet make_explicit_pairs(int variant, std::span<const DirectionPair> pairs);

/// Observation directions from `directions` whose polar angle lies in the
/// closed arc [from, to] (radians, to > from, arc may wrap past 2 pi).
std::vector<Vec2> directions_in_arc(std::span<const Vec2> directions, double from, double to);

/// Rectangular grid of sampling points; point (i, j) = corner + (i h, j h).
/// Linear index is row-major: index = j * nx + i.
struct SamplingGrid {
  Vec2 corner{-4.0, -4.0};
  double spacing = 0.1;
  int nx = 81;
  int ny = 81;

  SamplingGrid() = default;
  SamplingGrid(Vec2 corner, double spacing, int nx, int ny);

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  Vec2 point(int i, int j) const { return {corner.x + i * spacing, corner.y + j * spacing}; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  std::pair<int, int> cell(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(nx)),
            static_cast<int>(index / static_cast<std::size_t>(nx))};
  }
};

/// Region between two parallel lines { y : lower <= y . normal <= upper }.
/// Offsets are stored against the unit normal; multiply by |theta - xhat| to
/// get the scaled offsets alpha = -y . (theta - xhat) used for hyperplanes.
struct Strip {
  Vec2 normal;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(Vec2 y, double tol = 0.0) const;
  double distance(Vec2 z) const;
  double width() const { return upper - lower; }
  bool contains(const Strip &inner, double tol = 0.0) const;
};

Strip strip_hull(const ParametricBoundary &b, Vec2 normal);
Strip strip_hull(std::span<const Vec2> points, Vec2 normal);

struct IlluminatedPartition {
  std::vector<std::size_t> illuminated;  // nu . theta < 0
  std::vector<std::size_t> shadow;  // nu . theta >= 0
};

IlluminatedPartition illuminated_partition(std::span<const BoundaryNode> nodes, Vec2 theta);

}  // namespace dsm
