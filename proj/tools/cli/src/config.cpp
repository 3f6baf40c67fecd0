#include "dsm/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dsm::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Vec2 read_vec(const json &j, const char *what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(std::string(what) + " must be a two-element number array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json write_vec(Vec2 v) { return ordered_json::array({v.x, v.y}); }

template <typename T>
T value_or(const json &j, const char *key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

const json &require(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

ShapeSpec read_shape(const json &j) {
  ShapeSpec s;
  s.shape = value_or<std::string>(j, "shape", "kite");
  s.center = j.contains("center") ? read_vec(j.at("center"), "center") : Vec2{};
  s.radius = value_or<double>(j, "radius", 0.0);
  return s;
}

void write_shape(ordered_json &o, const ShapeSpec &s) {
  o["shape"] = s.shape;
  o["center"] = write_vec(s.center);
  if (s.shape != "kite") o["radius"] = s.radius;
}

ComponentSpec read_component(const json &j) {
  if (!j.is_object()) throw ConfigError("scene components must be objects");
  ComponentSpec c;
  c.type = value_or<std::string>(j, "type", "obstacle");
  c.model = value_or<std::string>(j, "model", "");
  if (c.type == "points") {
    for (const json &p : require(j, "points")) {
      PointSpec ps;
      ps.position = read_vec(require(p, "position"), "position");
      if (p.contains("strength")) {
        const Vec2 s = read_vec(p.at("strength"), "strength");
        ps.strength = {s.x, s.y};
      }
      c.points.push_back(ps);
    }
  } else if (c.type == "medium" || c.type == "obstacle") {
    c.shape = read_shape(j);
    c.condition = value_or<std::string>(j, "condition", "soft");
    c.lambda = value_or<double>(j, "lambda", 0.0);
    c.nodes = value_or<int>(j, "nodes", 0);
    c.contrast = value_or<double>(j, "contrast", 0.0);
    c.cell = value_or<double>(j, "cell", 0.0);
  } else {
    throw ConfigError("unknown component type '" + c.type + "'");
  }
  return c;
}

ordered_json write_component(const ComponentSpec &c) {
  ordered_json o;
  o["type"] = c.type;
  if (!c.model.empty()) o["model"] = c.model;
  if (c.type == "points") {
    ordered_json pts = ordered_json::array();
    for (const PointSpec &p : c.points) {
      pts.push_back({{"position", write_vec(p.position)},
                     {"strength", ordered_json::array({p.strength.real(), p.strength.imag()})}});
    }
    o["points"] = pts;
    return o;
  }
  write_shape(o, c.shape);
  if (c.type == "obstacle") {
    o["condition"] = c.condition;
    if (c.condition == "impedance") o["lambda"] = c.lambda;
    if (c.nodes != 0) o["nodes"] = c.nodes;
  } else {
    o["contrast"] = c.contrast;
    if (c.cell != 0.0) o["cell"] = c.cell;
  }
  return o;
}

PairSpec read_pairs(const json &j) {
  PairSpec p;
  p.variant = value_or<int>(j, "variant", 1);
  p.mirrors = value_or<bool>(j, "mirrors", false);
  if (j.contains("directions")) {
    const json &d = j.at("directions");
    if (d.is_number_integer()) {
      p.count = d.get<int>();
    } else if (d.is_array()) {
      for (const json &v : d) p.directions.push_back(read_vec(v, "direction"));
      if (p.directions.empty()) throw ConfigError("direction list is empty");
    } else {
      throw ConfigError("'directions' must be a count or a list of vectors");
    }
  }
  if (j.contains("rotation")) {
    const json &q = j.at("rotation");
    if (!q.is_array() || q.size() != 2) throw ConfigError("rotation must be a 2x2 array");
    const Vec2 r0 = read_vec(q[0], "rotation row");
    const Vec2 r1 = read_vec(q[1], "rotation row");
    p.rotation = Mat2{r0.x, r0.y, r1.x, r1.y};
  }
  if (j.contains("theta")) p.theta = read_vec(j.at("theta"), "theta");
  if (j.contains("explicit")) {
    for (const json &e : j.at("explicit")) {
      p.explicit_pairs.push_back({read_vec(require(e, "xhat"), "xhat"), read_vec(require(e, "theta"), "theta")});
    }
    if (p.explicit_pairs.empty()) throw ConfigError("explicit pair list is empty");
  }
  return p;
}

ordered_json write_pairs(const PairSpec &p) {
  ordered_json o;
  o["variant"] = p.variant;
  if (!p.explicit_pairs.empty()) {
    ordered_json e = ordered_json::array();
    for (const DirectionPair &d : p.explicit_pairs) e.push_back({{"xhat", write_vec(d.xhat)}, {"theta", write_vec(d.theta)}});
    o["explicit"] = e;
  } else if (!p.directions.empty()) {
    ordered_json d = ordered_json::array();
    for (Vec2 v : p.directions) d.push_back(write_vec(v));
    o["directions"] = d;
  } else {
    o["directions"] = p.count;
  }
  if (p.rotation) {
    o["rotation"] = ordered_json::array(
        {ordered_json::array({p.rotation->a11, p.rotation->a12}), ordered_json::array({p.rotation->a21, p.rotation->a22})});
  }
  if (p.theta) o["theta"] = write_vec(*p.theta);
  if (p.mirrors) o["mirrors"] = true;
  return o;
}

ParametricBoundary make_boundary(const ComponentSpec &s, int nodes) {
  if (s.shape.shape == "kite") return ParametricBoundary::kite(s.shape.center, nodes);
  if (s.shape.shape == "circle" || s.shape.shape == "disk") {
    return ParametricBoundary::circle(s.shape.center, s.shape.radius, nodes);
  }
  throw ConfigError("unknown shape '" + s.shape.shape + "'");
}

std::string default_model(const ComponentSpec &c) {
  if (!c.model.empty()) return c.model;
  if (c.type == "points") return "foldy";
  if (c.type == "medium") return "lippmann_schwinger";
  return "bie";
}

Scene build_scene(const ComponentSpec &c, double k_max) {
  if (c.type == "points") {
    std::vector<Vec2> pos;
    std::vector<Complex> tau;
    for (const PointSpec &p : c.points) {
      pos.push_back(p.position);
      tau.push_back(p.strength);
    }
    return Scene::point_set(PointScattererSet(pos, tau));
  }
  if (c.type == "medium") {
    if (default_model(c) == "bie") {
      return Scene::penetrable_body({make_boundary(c, resolved_nodes(c, k_max)), c.contrast});
    }
    if (c.shape.shape == "disk" || c.shape.shape == "circle") {
      return Scene::penetrable(MediumContrast::disk(c.shape.center, c.shape.radius, c.contrast));
    }
    const double cell = c.cell > 0.0 ? c.cell : 0.01;
    return Scene::penetrable(MediumContrast::from_boundary(make_boundary(c, 512), c.contrast, cell));
  }
  BoundaryCondition bc;
  if (c.condition == "soft") {
    bc = BoundaryCondition::soft();
  } else if (c.condition == "hard") {
    bc = BoundaryCondition::hard();
  } else if (c.condition == "impedance") {
    bc = BoundaryCondition::impedance(c.lambda);
  } else {
    throw ConfigError("unknown boundary condition '" + c.condition + "'");
  }
  return Scene::obstacle_set({{make_boundary(c, resolved_nodes(c, k_max)), bc}});
}

}  // namespace

IndicatorKind parse_indicator(const std::string &name) {
  if (name == "i1") return IndicatorKind::i1;
  if (name == "i2") return IndicatorKind::i2;
  throw ConfigError("indicator must be 'i1' or 'i2', got '" + name + "'");
}

ExperimentConfig parse_config(const std::string &json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.name = value_or<std::string>(j, "name", "");
  const json &scene = require(j, "scene");
  if (!scene.is_array() || scene.empty()) throw ConfigError("'scene' must be a non-empty list of components");
  for (const json &comp : scene) c.components.push_back(read_component(comp));
  c.pairs = read_pairs(require(j, "pairs"));
  const json &band = require(j, "band");
  if (!band.is_array() || band.size() != 2) throw ConfigError("'band' must be [k_min, k_max]");
  c.k_min = band[0].get<double>();
  c.k_max = band[1].get<double>();
  c.count = value_or<int>(j, "count", 20);
  c.noise = value_or<double>(j, "noise", 0.0);
  c.seed = value_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("grid")) {
    const json &g = j.at("grid");
    c.grid.corner = g.contains("corner") ? read_vec(g.at("corner"), "grid corner") : c.grid.corner;
    c.grid.spacing = value_or<double>(g, "spacing", c.grid.spacing);
    c.grid.nx = value_or<int>(g, "nx", c.grid.nx);
    c.grid.ny = value_or<int>(g, "ny", c.grid.ny);
  }
  c.indicator = value_or<std::string>(j, "indicator", "i1");
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig &c) {
  ordered_json o;
  if (!c.name.empty()) o["name"] = c.name;
  ordered_json scene = ordered_json::array();
  for (const ComponentSpec &comp : c.components) scene.push_back(write_component(comp));
  o["scene"] = scene;
  o["pairs"] = write_pairs(c.pairs);
  o["band"] = ordered_json::array({c.k_min, c.k_max});
  o["count"] = c.count;
  o["noise"] = c.noise;
  o["seed"] = c.seed;
  o["grid"] = {{"corner", write_vec(c.grid.corner)}, {"spacing", c.grid.spacing}, {"nx", c.grid.nx}, {"ny", c.grid.ny}};
  o["indicator"] = c.indicator;
  return o.dump(2) + "\n";
}

void validate_config(const ExperimentConfig &c) {
  if (c.components.empty()) throw ConfigError("scene has no components");
  if (!(c.k_min > 0.0) || !(c.k_max > c.k_min)) throw ConfigError("band must satisfy 0 < k_min < k_max");
  if (c.count < 2) throw ConfigError("count must be at least 2");
  if (!(c.noise >= 0.0 && c.noise < 1.0)) throw ConfigError("noise must lie in [0, 1)");
  if (!(c.grid.spacing > 0.0) || c.grid.nx < 1 || c.grid.ny < 1) throw ConfigError("invalid sampling grid");
  parse_indicator(c.indicator);
  const PairSpec &p = c.pairs;
  if (p.variant < 1 || p.variant > 3) throw ConfigError("pair variant must be 1, 2 or 3");
  if (p.explicit_pairs.empty()) {
    if (p.directions.empty() && p.count < 1) throw ConfigError("direction set is empty");
    if (p.variant == 2 && !p.rotation) throw ConfigError("variant 2 requires 'rotation'");
    if (p.variant == 3 && !p.theta) throw ConfigError("variant 3 requires 'theta'");
  }
  if (p.rotation && !p.rotation->is_orthogonal()) throw ConfigError("rotation is not orthogonal");
  for (const ComponentSpec &comp : c.components) {
    const std::string model = default_model(comp);
    try {
      forward_model_from_string(model);
    } catch (const DomainError &e) {
      throw ConfigError(e.what());
    }
    if (comp.type == "points") {
      if (comp.points.empty()) throw ConfigError("point component has no points");
      if (model != "foldy") throw ConfigError("point components use the foldy model");
      continue;
    }
    if (comp.shape.shape != "kite" && comp.shape.shape != "circle" && comp.shape.shape != "disk") {
      throw ConfigError("unknown shape '" + comp.shape.shape + "'");
    }
    if (comp.shape.shape != "kite" && !(comp.shape.radius > 0.0)) throw ConfigError("radius must be positive");
    if (comp.type == "medium") {
      if (model != "born" && model != "lippmann_schwinger" && model != "bie") {
        throw ConfigError("medium components use born, lippmann_schwinger or bie");
      }
      if (!(comp.contrast + 1.0 > 0.0)) throw ConfigError("contrast must satisfy q = contrast + 1 > 0");
    } else {
      if (model != "bie" && model != "kirchhoff") throw ConfigError("obstacle components use bie or kirchhoff");
      if (comp.condition == "impedance" && !(comp.lambda > 0.0)) throw ConfigError("impedance needs lambda > 0");
      if (comp.condition != "soft" && comp.condition != "hard" && comp.condition != "impedance") {
        throw ConfigError("unknown boundary condition '" + comp.condition + "'");
      }
      if (model == "kirchhoff" && comp.condition == "impedance") {
        throw ConfigError("the kirchhoff model needs a soft or hard boundary");
      }
    }
    if (comp.nodes != 0 && (comp.nodes < 4 || comp.nodes % 2 != 0)) {
      throw ConfigError("boundary node count must be even and at least 4");
    }
  }
}

DirectionPairSet build_pairs(const ExperimentConfig &c) {
  const PairSpec &p = c.pairs;
  try {
    if (!p.explicit_pairs.empty()) return make_explicit_pairs(p.variant, p.explicit_pairs);
    if (!p.directions.empty()) return make_direction_pairs(p.variant, p.directions, p.rotation, p.theta);
    return make_direction_pairs(p.variant, p.count, p.rotation, p.theta);
  } catch (const DomainError &e) {
    throw ConfigError(e.what());
  }
}

int resolved_nodes(const ComponentSpec &s, double k_max) {
  if (s.nodes > 0) return s.nodes;
  const double k = s.type == "medium" ? k_max * std::sqrt(std::max(1.0, s.contrast + 1.0)) : k_max;
  const int need = minimum_boundary_nodes(make_boundary(s, 512), k);
  return std::max(64, (need + 31) / 32 * 32);
}

FarFieldDataset run_forward(const ExperimentConfig &c) {
  validate_config(c);
  const DirectionPairSet pairs = build_pairs(c);
  if (pairs.pairs.empty()) throw ConfigError("every direction pair is degenerate");
  AssemblyOptions options;
  options.include_mirrors = c.pairs.mirrors;
  std::vector<FarFieldDataset> parts;
  for (const ComponentSpec &comp : c.components) {
    Scene scene;
    try {
      scene = build_scene(comp, c.k_max);
    } catch (const DomainError &e) {
      throw ConfigError(e.what());
    }
    parts.push_back(assemble_dataset(scene, pairs, c.k_min, c.k_max, c.count,
                                     forward_model_from_string(default_model(comp)), options));
  }
  FarFieldDataset d = superpose_datasets(parts);
  return perturb_noise(d, c.noise, c.seed);
}

}  // namespace dsm::cli
