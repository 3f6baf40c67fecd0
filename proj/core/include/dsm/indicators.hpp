#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsm/common.hpp"
#include "dsm/forward_bie.hpp"
#include "dsm/forward_weak.hpp"
#include "dsm/geometry.hpp"

namespace dsm {

struct ObstacleComponent {
  ParametricBoundary boundary;
  BoundaryCondition condition;
};

/// Homogeneous penetrable body: q = 1 + contrast inside the curve.
struct PenetrableBody {
  ParametricBoundary boundary;
  double contrast = 0.0;
};

/// Ground truth: point scatterers, a penetrable medium, a homogeneous
/// penetrable body, or one or more obstacles. Several obstacles are treated as independent scatterers whose
/// far fields add.
struct Scene {
  enum class Kind { points, medium, body, obstacles };

  Kind kind = Kind::points;
  PointScattererSet points;
  MediumContrast medium;
  std::optional<PenetrableBody> body;
  std::vector<ObstacleComponent> obstacles;

  static Scene point_set(PointScattererSet s);
  static Scene penetrable(MediumContrast m);
  /// Solved by the bie model through the transmission equation.
  static Scene penetrable_body(PenetrableBody b);
  static Scene obstacle_set(std::vector<ObstacleComponent> components);
};

enum class ForwardModel { foldy, born, lippmann_schwinger, bie, kirchhoff };

std::string to_string(ForwardModel m);
/// Inverse of to_string; throws DomainError for unknown names.
ForwardModel forward_model_from_string(const std::string &name);

struct Provenance {
  std::string model;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  double k_min = 0.0;
  double k_max = 0.0;
};

/// u_inf(xhat, theta, k) on a pair set and a wavenumber list. Values are
/// stored pair-major: value(p, q) = values[p * K + q].
struct FarFieldDataset {
  DirectionPairSet pairs;
  std::vector<double> wavenumbers;
  std::vector<Complex> values;
  Provenance provenance;

  std::size_t pair_count() const { return pairs.pairs.size(); }
  std::size_t k_count() const { return wavenumbers.size(); }
  Complex value(std::size_t p, std::size_t q) const { return values[p * k_count() + q]; }
  Complex &value(std::size_t p, std::size_t q) { return values[p * k_count() + q]; }

  /// Throws FormatError when dimensions or ordering are inconsistent.
  void validate() const;
};

/// k_i = k_min + i (k_max - k_min) / (count - 1), i = 0..count-1.
std::vector<double> wavenumber_band(double k_min, double k_max, int count);

struct AssemblyOptions {
  /// Append (-xhat, -theta) for every pair lacking its mirror.
  bool include_mirrors = false;
  int workers = 0;  // 0: worker_count()
  /// Volume solver raster; chosen from the medium support when absent.
  std::optional<LsRaster> raster;
  LsOptions ls;
};

/// Fills the data matrix by the selected forward model. Obstacle solves are
/// grouped so that one factorisation serves every incident direction at a
/// given wavenumber. Solver failures are collected per (pair, k) cell and
/// reported together in one SolverError.
FarFieldDataset assemble_dataset(const Scene &scene, const DirectionPairSet &pairs, double k_min, double k_max,
                                 int count, ForwardModel model, const AssemblyOptions &options = {});

/// v -> v (1 + level (z1 + i z2)), z1, z2 independent uniform on [-1, 1],
/// drawn from mt19937_64(seed) in pair-major order.
FarFieldDataset perturb_noise(const FarFieldDataset &d, double level, std::uint64_t seed);

/// Sums the values of datasets that share pairs and wavenumbers (far fields
/// of independent scatterers). Model tags are joined with '+'.
FarFieldDataset superpose_datasets(std::span<const FarFieldDataset> parts);

/// Concatenates the pairs of several datasets sharing one wavenumber list.
FarFieldDataset merge_datasets(std::span<const FarFieldDataset> parts);

/// Index of the pair (xhat, theta) in d, matched to 1e-9.
std::optional<std::size_t> find_pair(const FarFieldDataset &d, Vec2 xhat, Vec2 theta);

enum class IndicatorKind { i1, i2 };

struct IndicatorField {
  SamplingGrid grid;
  std::vector<double> values;  // row-major, grid.index(i, j)
  IndicatorKind kind = IndicatorKind::i1;
  int variant = 1;
  std::size_t pair_count = 0;

  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// I1(z) = sum_pairs | int u_inf(xhat, theta, k) e^{-ik z.(theta - xhat)} dk |,
/// the k-integral by the composite trapezoid rule on the dataset nodes.
IndicatorField indicator_I1(const FarFieldDataset &d, const SamplingGrid &grid);

/// As I1 with the integrand u_inf(xhat, theta, k) + conj(u_inf(-xhat, -theta, k)),
/// the mirror values taken from `mirror`. Throws DomainError when a mirror
/// pair or wavenumber is missing.
IndicatorField indicator_I2(const FarFieldDataset &d, const FarFieldDataset &mirror, const SamplingGrid &grid);

/// Single-pair indicator value at z.
double single_pair_indicator(const FarFieldDataset &d, std::size_t pair, Vec2 z);

struct ProfileLine {
  Vec2 anchor;
  Vec2 direction;  // normalised internally
  double extent = 4.0;  // abscissae run over [-extent, extent]
  double step = 0.1;
};

struct Profile {
  std::vector<double> abscissa;
  std::vector<double> values;
};

/// Single-pair I1 along anchor + s direction.
Profile indicator_profile(const FarFieldDataset &d, std::size_t pair, const ProfileLine &line);

/// Single-pair I2 along the line.
Profile indicator_profile(const FarFieldDataset &d, const FarFieldDataset &mirror, std::size_t pair,
                          const ProfileLine &line);

}  // namespace dsm
