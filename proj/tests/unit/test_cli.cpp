#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsm/cli/app.hpp"
#include "dsm/cli/config.hpp"
#include "dsm/cli/field_io.hpp"
#include "dsm/cli/repro.hpp"
#include "dsm/dataset_io.hpp"
#include "dsm/forward_kirchhoff.hpp"

using namespace dsm;
using namespace dsm::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dsm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dsm");
    std::vector<const char *> argv;
    for (const std::string &a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string write(const std::string &name, const std::string &text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char *kKiteConfig = R"({
  "scene": [{"type": "obstacle", "shape": "kite", "condition": "soft"}],
  "pairs": {"variant": 1, "directions": [[1, 0]]},
  "band": [10, 20], "count": 20, "noise": 0.1, "seed": 3
})";

const char *kPointsConfig = R"({
  "scene": [{"type": "points", "points": [
      {"position": [1, 1]}, {"position": [-1, 1]}, {"position": [1, -1]}, {"position": [-1, -1]}]}],
  "pairs": {"variant": 1, "directions": [[1, 0]]},
  "band": [20, 100], "count": 160
})";

int data_rows(const fs::path &csv) {
  std::ifstream in(csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

IndicatorField small_field(std::vector<double> values, int nx, int ny) {
  IndicatorField f;
  f.grid = SamplingGrid({0.0, 0.0}, 1.0, nx, ny);
  f.values = std::move(values);
  return f;
}

}  // namespace

TEST(Config, RoundTripIsIdentity) {
  for (int ex = 1; ex <= 6; ++ex) {
    for (const ReproRun &r : example_runs(ex)) {
      const std::string text = serialize_config(r.config);
      EXPECT_EQ(serialize_config(parse_config(text)), text) << r.name;
    }
  }
}

TEST(Config, DefaultsFollowComponentType) {
  const ExperimentConfig c = parse_config(kPointsConfig);
  EXPECT_EQ(c.count, 160);
  EXPECT_EQ(c.grid.nx, 81);
  EXPECT_DOUBLE_EQ(c.grid.corner.x, -4.0);
  EXPECT_DOUBLE_EQ(c.grid.spacing, 0.1);
  EXPECT_EQ(c.indicator, "i1");
  EXPECT_EQ(c.components[0].points.size(), 4u);
  EXPECT_EQ(c.components[0].points[0].strength, Complex(1.0, 0.0));
}

TEST(Config, CrossFieldValidation) {
  auto bad = [](const std::string &text) { EXPECT_THROW(parse_config(text), ConfigError) << text; };
  const std::string scene = R"("scene": [{"type": "obstacle", "shape": "kite"}], "band": [10, 20])";
  bad("not json");
  bad("[]");
  bad(R"({"pairs": {"directions": 4}, "band": [10, 20]})");
  bad("{" + scene + R"(, "pairs": {"variant": 2, "directions": 4}})");
  bad("{" + scene + R"(, "pairs": {"variant": 3, "directions": 4}})");
  bad("{" + scene + R"(, "pairs": {"variant": 2, "directions": 4, "rotation": [[1, 1], [0, 1]]}})");
  bad("{" + scene + R"(, "pairs": {"variant": 1, "directions": []}})");
  bad("{" + scene + R"(, "pairs": {"variant": 1, "directions": 4}, "count": 1})");
  bad("{" + scene + R"(, "pairs": {"variant": 1, "directions": 4}, "noise": 1.5})");
  bad("{" + scene + R"(, "pairs": {"variant": 1, "directions": 4}, "indicator": "i3"})");
  bad(R"({"scene": [{"type": "obstacle", "shape": "kite", "condition": "impedance"}], "band": [10, 20],
          "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "obstacle", "shape": "kite", "nodes": 33}], "band": [10, 20], "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "obstacle", "shape": "kite", "model": "born"}], "band": [10, 20], "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "medium", "shape": "disk", "radius": 1, "contrast": -2}], "band": [10, 20],
          "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "medium", "shape": "kite", "contrast": 1, "model": "kirchhoff"}], "band": [10, 20],
          "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "medium", "shape": "kite", "contrast": 1, "nodes": 7}], "band": [10, 20],
          "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "blob"}], "band": [10, 20], "pairs": {"directions": 4}})");
  bad(R"({"scene": [{"type": "obstacle", "shape": "kite"}], "band": [20, 10], "pairs": {"directions": 4}})");
}

TEST(Config, NodeCountFollowsResolutionGuard) {
  ComponentSpec kite;
  EXPECT_EQ(resolved_nodes(kite, 20.0), 320);
  ComponentSpec small;
  small.shape = {"circle", {2.5, 2.5}, 0.1};
  EXPECT_EQ(resolved_nodes(small, 20.0), 64);
  kite.nodes = 100;
  EXPECT_EQ(resolved_nodes(kite, 20.0), 100);
  ComponentSpec body;
  body.type = "medium";
  body.shape.shape = "kite";
  body.contrast = 1.0;
  EXPECT_EQ(resolved_nodes(body, 20.0), 448);
}

TEST(Repro, BuiltInRunTable) {
  EXPECT_EQ(example_variants(1), (std::vector<std::string>{"a1", "a2"}));
  const auto ex4 = example_runs(4, "impedance");
  ASSERT_EQ(ex4.size(), 1u);
  EXPECT_DOUBLE_EQ(ex4[0].config.components[0].lambda, 0.5);
  EXPECT_EQ(example_runs(4, "penetrable")[0].config.components[0].model, "bie");
  for (const ReproRun &r : example_runs(6)) EXPECT_EQ(r.config.count, 40);
  const auto aperture = example_runs(3, "aperture");
  EXPECT_EQ(build_pairs(aperture[0].config).pairs.size(), 36u);
  const auto a2 = example_runs(1, "a2")[0];
  const auto pairs = build_pairs(a2.config);
  EXPECT_NEAR(pairs.pairs[0].xhat.y, 1.0, 1e-15);
  EXPECT_THROW(example_runs(7), ConfigError);
  EXPECT_THROW(example_runs(1, "zz"), ConfigError);
}

TEST_F(CliTest, ForwardWritesOneRowPerWavenumber) {
  const std::string cfg = write("kite.json", kKiteConfig);
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", (dir_ / "kite.csv").string()}), 0) << err_.str();
  EXPECT_EQ(data_rows(dir_ / "kite.csv"), 20);
  EXPECT_NE(out_.str().find("1 pairs x 20 wavenumbers"), std::string::npos);

  const std::string pts = write("pts.json", kPointsConfig);
  ASSERT_EQ(run_cli({"forward", "--config", pts, "--out", (dir_ / "pts.csv").string()}), 0) << err_.str();
  EXPECT_EQ(data_rows(dir_ / "pts.csv"), 160);
  const FarFieldDataset d = load_dataset(dir_ / "pts.csv");
  EXPECT_EQ(d.provenance.model, "foldy");
  EXPECT_EQ(d.value(0, 0), foldy_far_field(PointScattererSet({{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}, {1.0, 1.0, 1.0, 1.0}),
                                           {-1, 0}, {1, 0}, 20.0));
}

TEST_F(CliTest, ForwardSuperposesComponents) {
  const std::string cfg = write("mix.json", R"({
    "scene": [{"type": "points", "points": [{"position": [2.5, 0]}]},
              {"type": "obstacle", "shape": "circle", "center": [0, 0], "radius": 0.5, "model": "kirchhoff"}],
    "pairs": {"variant": 1, "directions": 2}, "band": [10, 12], "count": 3})");
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", (dir_ / "mix.csv").string()}), 0) << err_.str();
  const FarFieldDataset d = load_dataset(dir_ / "mix.csv");
  EXPECT_EQ(d.provenance.model, "foldy+kirchhoff");
  const auto c = ParametricBoundary::circle({0, 0}, 0.5, resolved_nodes(parse_config(slurp(cfg)).components[1], 12.0));
  const Complex expect = foldy_far_field(PointScattererSet({{2.5, 0}}, {1.0}), {-1, 0}, {1, 0}, 11.0) +
                         kirchhoff_far_field({c, -2.0}, {-1, 0}, {1, 0}, 11.0);
  EXPECT_EQ(d.value(0, 1), expect);
}

TEST_F(CliTest, InvertSumsPairsOverFiles) {
  const std::string a = write("a.json", R"({"scene": [{"type": "points", "points": [{"position": [0.5, 0.2]}]}],
    "pairs": {"variant": 1, "directions": [[1, 0]]}, "band": [20, 40], "count": 30})");
  const std::string b = write("b.json", R"({"scene": [{"type": "points", "points": [{"position": [0.5, 0.2]}]}],
    "pairs": {"variant": 1, "directions": [[-1, 0]]}, "band": [20, 40], "count": 30})");
  ASSERT_EQ(run_cli({"forward", "--config", a, "--out", (dir_ / "a.csv").string()}), 0);
  ASSERT_EQ(run_cli({"forward", "--config", b, "--out", (dir_ / "b.csv").string()}), 0);
  ASSERT_EQ(run_cli({"invert", "--data", (dir_ / "a.csv").string(), (dir_ / "b.csv").string(), "--grid",
                     "-1,-1,0.25,9,9", "--out", (dir_ / "f.csv").string()}),
            0)
      << err_.str();
  const IndicatorField f = load_field(dir_ / "f.csv");
  EXPECT_EQ(f.pair_count, 2u);
  EXPECT_EQ(f.grid.nx, 9);
  const FarFieldDataset da = load_dataset(dir_ / "a.csv"), db = load_dataset(dir_ / "b.csv");
  const Vec2 z = f.grid.point(3, 5);
  EXPECT_NEAR(f.at(3, 5), single_pair_indicator(da, 0, z) + single_pair_indicator(db, 0, z), 1e-12 * f.at(3, 5));
}

TEST_F(CliTest, InvertErrorsExitWithTwo) {
  const std::string one = write("one.csv", "theta_x,theta_y,xhat_x,xhat_y,k,re,im\n1,0,-1,0,10,1,0\n");
  EXPECT_EQ(run_cli({"invert", "--data", one, "--out", (dir_ / "f.csv").string()}), 2);
  EXPECT_NE(err_.str().find("two wavenumbers"), std::string::npos);
  const std::string v3 = write("v3.csv",
                               "theta_x,theta_y,xhat_x,xhat_y,k,re,im\n1,0,0,1,10,1,0\n1,0,0,1,11,1,0\n");
  EXPECT_EQ(run_cli({"invert", "--data", v3, "--indicator", "i2", "--out", (dir_ / "f.csv").string()}), 2);
  EXPECT_NE(err_.str().find("mirror"), std::string::npos);
  EXPECT_EQ(run_cli({"invert", "--data", (dir_ / "none.csv").string(), "--out", (dir_ / "f.csv").string()}), 2);
  EXPECT_EQ(run_cli({"invert", "--data", v3, "--grid", "1,2,3", "--out", (dir_ / "f.csv").string()}), 2);
  EXPECT_EQ(run_cli({"invert", "--data", v3, "--indicator", "i9", "--out", (dir_ / "f.csv").string()}), 2);
}

TEST_F(CliTest, ForwardErrorsExitCodes) {
  const std::string empty = write("empty.json", R"({"scene": [{"type": "obstacle", "shape": "kite"}],
    "pairs": {"variant": 1, "directions": []}, "band": [10, 20]})");
  EXPECT_EQ(run_cli({"forward", "--config", empty, "--out", (dir_ / "x.csv").string()}), 2);
  EXPECT_NE(err_.str().find("direction list is empty"), std::string::npos);
  const std::string coarse = write("coarse.json", R"({"scene": [{"type": "obstacle", "shape": "kite", "nodes": 32}],
    "pairs": {"variant": 1, "directions": 1}, "band": [10, 20], "count": 3})");
  EXPECT_EQ(run_cli({"forward", "--config", coarse, "--out", (dir_ / "x.csv").string()}), 3);
  EXPECT_NE(err_.str().find("under-resolve"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
  EXPECT_EQ(run_cli({"forward", "--out", (dir_ / "x.csv").string()}), 2);
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(run_cli({"--help"}), 0);
}

TEST(Render, MinMaxMapping) {
  const std::string img = render_pgm(small_field({0.0, 1.0, 1.0, 0.0}, 2, 2));
  EXPECT_EQ(img, std::string("P5\n2 2\n255\n") + std::string("\xff\x00\x00\xff", 4));
  const std::string flat = render_pgm(small_field(std::vector<double>(6, 3.5), 3, 2));
  EXPECT_EQ(flat.substr(flat.size() - 6), std::string(6, '\0'));
  // Row ny - 1 is emitted first.
  const std::string tall = render_pgm(small_field({0.0, 2.0, 1.0}, 1, 3));
  EXPECT_EQ(tall.substr(tall.size() - 3), std::string("\x80\xff\x00", 3));
}

TEST(Render, HeaderForDefaultGrid) {
  IndicatorField f;
  f.values.assign(f.grid.size(), 1.0);
  f.values[5] = 2.0;
  const std::string img = render_pgm(f);
  EXPECT_EQ(img.rfind("P5\n81 81\n255\n", 0), 0u);
  EXPECT_EQ(img.size(), 13u + 81u * 81u);
}

TEST_F(CliTest, FieldRoundTripAndRenderCommand) {
  IndicatorField f = small_field({0.25, 1.0 / 3.0, 2.0, 1e-300, 7.0, 0.0}, 3, 2);
  f.kind = IndicatorKind::i2;
  f.variant = 2;
  save_field(f, dir_ / "f.csv");
  const IndicatorField g = load_field(dir_ / "f.csv");
  EXPECT_EQ(g.values, f.values);
  EXPECT_EQ(g.kind, IndicatorKind::i2);
  EXPECT_EQ(g.variant, 2);
  ASSERT_EQ(run_cli({"render", "--field", (dir_ / "f.csv").string(), "--out", (dir_ / "f.pgm").string()}), 0);
  EXPECT_EQ(slurp(dir_ / "f.pgm"), render_pgm(f));
  write("bad.csv", "1,2,3\n4,5\n");
  fs::copy_file(dir_ / "f.json", dir_ / "bad.json");
  EXPECT_EQ(run_cli({"render", "--field", (dir_ / "bad.csv").string(), "--out", (dir_ / "b.pgm").string()}), 2);
}

TEST_F(CliTest, ReproMatchesManualPipelineAndIsDeterministic) {
  ASSERT_EQ(run_cli({"repro", "--example", "5", "--variant", "a2_xd", "--outdir", (dir_ / "r1").string()}), 0)
      << err_.str();
  ASSERT_EQ(run_cli({"repro", "--example", "5", "--variant", "a2_xd", "--outdir", (dir_ / "r2").string()}), 0);
  const RunArtifacts a = artifacts_for(dir_ / "r1", "a2_xd");
  const RunArtifacts b = artifacts_for(dir_ / "r2", "a2_xd");
  for (const auto &[x, y] : {std::pair{a.config, b.config}, {a.dataset, b.dataset}, {a.field, b.field},
                             {a.image, b.image}}) {
    EXPECT_EQ(slurp(x), slurp(y)) << x;
  }
  const fs::path m = dir_ / "manual";
  ASSERT_EQ(run_cli({"forward", "--config", a.config.string(), "--out", (m / "data.csv").string()}), 0);
  ASSERT_EQ(run_cli({"invert", "--data", (m / "data.csv").string(), "--out", (m / "field.csv").string()}), 0);
  ASSERT_EQ(run_cli({"render", "--field", (m / "field.csv").string(), "--out", (m / "field.pgm").string()}), 0);
  EXPECT_EQ(slurp(m / "data.csv"), slurp(a.dataset));
  EXPECT_EQ(slurp(m / "field.csv"), slurp(a.field));
  EXPECT_EQ(slurp(m / "field.json"), slurp(sidecar_path(a.field)));
  EXPECT_EQ(slurp(m / "field.pgm"), slurp(a.image));
  EXPECT_EQ(run_cli({"repro", "--example", "9", "--outdir", m.string()}), 2);
  EXPECT_EQ(run_cli({"repro", "--example", "2", "--variant", "nope", "--outdir", m.string()}), 2);
}

TEST_F(CliTest, ExecutableExitStatus) {
  const std::string exe = DSM_CLI_EXE;
  auto status = [](const std::string &cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(exe + " --help"), 0);
  EXPECT_EQ(status(exe + " render"), 2);
  EXPECT_EQ(status(exe + " render --field " + (dir_ / "missing.csv").string() + " --out x.pgm"), 2);
  const std::string coarse = write("coarse.json", R"({"scene": [{"type": "obstacle", "shape": "kite", "nodes": 32}],
    "pairs": {"variant": 1, "directions": 1}, "band": [10, 20], "count": 3})");
  EXPECT_EQ(status(exe + " forward --config " + coarse + " --out " + (dir_ / "x.csv").string()), 3);
}
