#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dsm/geometry.hpp"
#include "dsm/indicators.hpp"

namespace dsm::cli {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ShapeSpec {
  std::string shape = "kite";  // kite | circle | disk
  Vec2 center;
  double radius = 0.0;  // circle / disk only
};

struct PointSpec {
  Vec2 position;
  Complex strength{1.0, 0.0};
};

/// One scatterer (or a group of point scatterers) and the model that
/// produces its far field. Far fields of all components are added.
struct ComponentSpec {
  std::string type = "obstacle";  // points | medium | obstacle
  std::string model;  // empty: foldy / lippmann_schwinger / bie by type
  std::vector<PointSpec> points;
  ShapeSpec shape;
  std::string condition = "soft";  // soft | hard | impedance
  double lambda = 0.0;
  int nodes = 0;  // boundary nodes, 0 = chosen from the band
  double contrast = 0.0;  // q - 1 for media
  double cell = 0.0;  // rasterisation cell for non-disk media, 0 = 0.01
};

struct PairSpec {
  int variant = 1;
  int count = 0;  // equispaced direction count; ignored when `directions` is set
  std::vector<Vec2> directions;
  std::optional<Mat2> rotation;
  std::optional<Vec2> theta;
  std::vector<DirectionPair> explicit_pairs;  // overrides the variant layout
  bool mirrors = false;
};

struct ExperimentConfig {
  std::string name;
  std::vector<ComponentSpec> components;
  PairSpec pairs;
  double k_min = 10.0;
  double k_max = 20.0;
  int count = 20;
  double noise = 0.0;
  std::uint64_t seed = 0;
  SamplingGrid grid;
  std::string indicator = "i1";  // i1 | i2
};

/// Parses and validates a JSON configuration. Throws ConfigError.
ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::filesystem::path &path);
/// Pretty-printed JSON; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig &c);

/// Cross-field checks (variant 2 needs Q, K >= 2, ...). Throws ConfigError.
void validate_config(const ExperimentConfig &c);

/// Pair set described by the configuration.
DirectionPairSet build_pairs(const ExperimentConfig &c);

/// Boundary node count used for an obstacle component: the configured count,
/// or the resolution guard at k_max rounded up to a multiple of 32 (at least 64).
int resolved_nodes(const ComponentSpec &s, double k_max);

/// Forward-simulates every component, superposes, and applies the noise.
FarFieldDataset run_forward(const ExperimentConfig &c);

IndicatorKind parse_indicator(const std::string &name);

}  // namespace dsm::cli
