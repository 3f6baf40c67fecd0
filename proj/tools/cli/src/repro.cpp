#include "dsm/cli/repro.hpp"

#include <cmath>

#include "dsm/cli/field_io.hpp"
#include "dsm/dataset_io.hpp"

namespace dsm::cli {
namespace {

constexpr std::uint64_t kSeed = 20190101;

const Mat2 kQuarterTurn{0.0, -1.0, 1.0, 0.0};

ComponentSpec kite(const std::string &condition = "soft", double lambda = 0.0) {
  ComponentSpec c;
  c.type = "obstacle";
  c.shape.shape = "kite";
  c.condition = condition;
  c.lambda = lambda;
  return c;
}

ComponentSpec points(const std::vector<Vec2> &where) {
  ComponentSpec c;
  c.type = "points";
  for (Vec2 p : where) c.points.push_back({p, {1.0, 0.0}});
  return c;
}

ExperimentConfig base(const std::string &name, std::vector<ComponentSpec> scene) {
  ExperimentConfig c;
  c.name = name;
  c.components = std::move(scene);
  c.k_min = 10.0;
  c.k_max = 20.0;
  c.count = 20;
  c.noise = 0.1;
  c.seed = kSeed;
  return c;
}

ExperimentConfig with_pairs(ExperimentConfig c, int variant, std::vector<Vec2> directions, int count = 0) {
  c.pairs.variant = variant;
  c.pairs.directions = std::move(directions);
  c.pairs.count = count;
  if (variant == 2) c.pairs.rotation = kQuarterTurn;
  return c;
}

// Letter glyphs snapped to the 0.1 sampling lattice.
std::vector<Vec2> glyph_points() {
  std::vector<Vec2> pts;
  for (int m = 0; m < 7; ++m) {
    const double a = kPi / 4.0 + m * (3.0 * kPi / 2.0) / 6.0;
    pts.push_back({-2.5 + std::cos(a), std::sin(a)});
  }
  for (int m = 0; m < 4; ++m) {
    const double t = m / 3.0;
    pts.push_back({-0.6 * t, 1.0 - 2.0 * t});
    if (m > 0) pts.push_back({0.6 * t, 1.0 - 2.0 * t});
  }
  pts.push_back({0.0, -1.0 / 3.0});
  for (double deg : {30.0, 90.0, 150.0, 210.0, 270.0}) {
    const double a = deg * kPi / 180.0;
    pts.push_back({2.5 + 0.5 * std::cos(a), 0.5 + 0.5 * std::sin(a)});
  }
  for (double deg : {30.0, -30.0, -90.0, -150.0}) {
    const double a = deg * kPi / 180.0;
    pts.push_back({2.5 + 0.5 * std::cos(a), -0.5 + 0.5 * std::sin(a)});
  }
  for (Vec2 &p : pts) p = {std::round(10.0 * p.x) / 10.0, std::round(10.0 * p.y) / 10.0};
  return pts;
}

std::vector<ReproRun> all_runs(int example) {
  const Vec2 e1{1.0, 0.0};
  const Vec2 e2{0.0, 1.0};
  const double s = std::sqrt(0.5);
  std::vector<ReproRun> runs;
  auto add = [&runs](std::string name, ExperimentConfig c) {
    c.name = "example" + c.name + "_" + name;
    runs.push_back({std::move(name), std::move(c)});
  };
  switch (example) {
    case 1:
      add("a1", with_pairs(base("1", {kite()}), 1, {e1}));
      add("a2", with_pairs(base("1", {kite()}), 2, {e1}));
      break;
    case 2:
      add("a1", with_pairs(base("2", {kite()}), 1, {e1, -e1}));
      add("a2", with_pairs(base("2", {kite()}), 2, {e1, -e1}));
      break;
    case 3: {
      for (int v = 1; v <= 2; ++v) {
        for (const char *ind : {"i1", "i2"}) {
          ExperimentConfig c = with_pairs(base("3", {kite()}), v, {}, 32);
          c.indicator = ind;
          c.pairs.mirrors = c.indicator == "i2";
          add("a" + std::to_string(v) + "_" + ind, c);
        }
      }
      const std::vector<std::pair<std::string, Vec2>> fixed = {{"a3_px", e1}, {"a3_py", e2}, {"a3_mx", -e1}, {"a3_my", -e2}};
      for (const auto &[name, theta] : fixed) {
        ExperimentConfig c = with_pairs(base("3", {kite()}), 3, {}, 32);
        c.pairs.theta = theta;
        add(name, c);
      }
      // Observation arcs facing each incident direction, closed at both ends.
      const std::vector<Vec2> all = equispaced_directions(32);
      const std::vector<std::pair<Vec2, double>> arcs = {
          {e1, 0.75 * kPi}, {e2, 1.25 * kPi}, {-e1, 1.75 * kPi}, {-e2, 0.25 * kPi}};
      ExperimentConfig c = base("3", {kite()});
      c.pairs.variant = 3;
      for (const auto &[theta, from] : arcs) {
        for (Vec2 x : directions_in_arc(all, from, from + 0.5 * kPi)) c.pairs.explicit_pairs.push_back({x, theta});
      }
      add("aperture", c);
      break;
    }
    case 4: {
      add("hard", with_pairs(base("4", {kite("hard")}), 1, {}, 32));
      add("impedance", with_pairs(base("4", {kite("impedance", 0.5)}), 1, {}, 32));
      ComponentSpec medium;
      medium.type = "medium";
      medium.shape.shape = "kite";
      medium.contrast = 1.0;
      medium.model = "bie";
      add("penetrable", with_pairs(base("4", {medium}), 1, {}, 32));
      break;
    }
    case 5: {
      const std::vector<Vec2> corners = {{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}};
      auto band = [](ExperimentConfig c) {
        c.k_min = 20.0;
        c.k_max = 100.0;
        c.count = 160;
        return c;
      };
      const ExperimentConfig four = band(base("5", {points(corners)}));
      add("a1_x", with_pairs(four, 1, {e1}));
      add("a1_y", with_pairs(four, 1, {e2}));
      add("a1_xx", with_pairs(four, 1, {e1, -e1}));
      add("a2_x", with_pairs(four, 2, {e1}));
      add("a2_d", with_pairs(four, 2, {{s, s}}));
      add("a2_xd", with_pairs(four, 2, {e1, {s, s}}));
      add("cas", with_pairs(band(base("5", {points(glyph_points())})), 1, {}, 32));
      break;
    }
    case 6: {
      ComponentSpec circle;
      circle.type = "obstacle";
      circle.shape = {"circle", {2.5, 2.5}, 0.1};
      const std::vector<std::pair<std::string, std::vector<ComponentSpec>>> scenes = {
          {"circle", {kite(), circle}}, {"points", {kite(), points({{2.5, 2.0}, {2.5, 0.0}, {2.5, -2.0}})}}};
      for (const auto &[tag, scene] : scenes) {
        ExperimentConfig c = base("6", scene);
        c.count = 40;
        add(tag + "_1", with_pairs(c, 1, {e1}));
        add(tag + "_4", with_pairs(c, 1, {}, 4));
        add(tag + "_32", with_pairs(c, 1, {}, 32));
      }
      break;
    }
    default:
      throw ConfigError("example must be between 1 and 6, got " + std::to_string(example));
  }
  return runs;
}

}  // namespace

std::vector<std::string> example_variants(int example) {
  std::vector<std::string> names;
  for (const ReproRun &r : all_runs(example)) names.push_back(r.name);
  return names;
}

std::vector<ReproRun> example_runs(int example, const std::string &variant) {
  std::vector<ReproRun> runs = all_runs(example);
  if (variant.empty()) return runs;
  for (ReproRun &r : runs) {
    if (r.name == variant) return {std::move(r)};
  }
  std::string known;
  for (const ReproRun &r : runs) known += (known.empty() ? "" : ", ") + r.name;
  throw ConfigError("example " + std::to_string(example) + " has no variant '" + variant + "' (known: " + known + ")");
}

RunArtifacts artifacts_for(const std::filesystem::path &outdir, const std::string &run) {
  const std::filesystem::path dir = outdir / run;
  return {dir / "config.json", dir / "data.csv", dir / "field.csv", dir / "field.pgm"};
}

void run_pipeline(const ExperimentConfig &config, const RunArtifacts &out) {
  for (const auto &p : {out.config, out.dataset, out.field, out.image}) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  }
  write_file_atomic(out.config, serialize_config(config));
  const FarFieldDataset data = run_forward(config);
  save_dataset(data, out.dataset);
  const IndicatorField field = parse_indicator(config.indicator) == IndicatorKind::i1
                                   ? indicator_I1(data, config.grid)
                                   : indicator_I2(data, data, config.grid);
  save_field(field, out.field);
  write_file_atomic(out.image, render_pgm(field));
}

}  // namespace dsm::cli
