#include "dsm/cli/app.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dsm/cli/config.hpp"
#include "dsm/cli/field_io.hpp"
#include "dsm/cli/repro.hpp"
#include "dsm/dataset_io.hpp"

namespace dsm::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

SamplingGrid parse_grid(const std::string &spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char *end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) throw ConfigError("grid entry '" + item + "' is not a number");
    v.push_back(x);
  }
  if (v.size() != 5) throw ConfigError("grid must be cx,cy,h,nx,ny");
  if (v[3] != std::floor(v[3]) || v[4] != std::floor(v[4]) || v[3] < 1 || v[4] < 1 || !(v[2] > 0.0)) {
    throw ConfigError("grid needs h > 0 and positive integer nx, ny");
  }
  return SamplingGrid({v[0], v[1]}, v[2], static_cast<int>(v[3]), static_cast<int>(v[4]));
}

void prepare_parent(const std::filesystem::path &p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

int cmd_forward(const std::string &config_path, const std::string &out_path, std::ostream &out) {
  const auto t0 = Clock::now();
  const ExperimentConfig config = load_config(config_path);
  const FarFieldDataset data = run_forward(config);
  prepare_parent(out_path);
  save_dataset(data, out_path);
  out << "forward: " << data.pair_count() << " pairs x " << data.k_count() << " wavenumbers, model "
      << data.provenance.model << ", noise " << format_double(config.noise) << ", "
      << fixed(seconds_since(t0), 2) << " s -> " << out_path << "\n";
  return kExitOk;
}

IndicatorField invert(const std::vector<std::string> &data_paths, const SamplingGrid &grid, IndicatorKind kind) {
  std::vector<FarFieldDataset> parts;
  for (const std::string &p : data_paths) parts.push_back(load_dataset(p));
  const FarFieldDataset merged = parts.size() == 1 ? parts.front() : merge_datasets(parts);
  return kind == IndicatorKind::i1 ? indicator_I1(merged, grid) : indicator_I2(merged, merged, grid);
}

int cmd_invert(const std::vector<std::string> &data_paths, const std::string &grid_spec, const std::string &kind,
               const std::string &out_path, std::ostream &out) {
  const auto t0 = Clock::now();
  const SamplingGrid grid = grid_spec.empty() ? SamplingGrid{} : parse_grid(grid_spec);
  const IndicatorField field = invert(data_paths, grid, parse_indicator(kind));
  prepare_parent(out_path);
  save_field(field, out_path);
  out << "invert: " << kind << " over " << field.pair_count << " pairs on " << grid.nx << "x" << grid.ny
      << " grid, " << fixed(seconds_since(t0), 2) << " s -> " << out_path << "\n";
  return kExitOk;
}

int cmd_render(const std::string &field_path, const std::string &out_path, std::ostream &out) {
  const IndicatorField field = load_field(field_path);
  prepare_parent(out_path);
  write_file_atomic(out_path, render_pgm(field));
  out << "render: " << field.grid.nx << "x" << field.grid.ny << " -> " << out_path << "\n";
  return kExitOk;
}

int cmd_repro(int example, const std::string &variant, const std::string &outdir, std::ostream &out) {
  for (const ReproRun &run : example_runs(example, variant)) {
    const auto t0 = Clock::now();
    const RunArtifacts files = artifacts_for(outdir, run.name);
    run_pipeline(run.config, files);
    out << "repro " << example << " " << run.name << ": " << fixed(seconds_since(t0), 2) << " s -> "
        << files.image.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Direct sampling reconstruction from multi-frequency backscattering far-field data", "dsm"};
  app.require_subcommand(1);

  std::string config_path, data_out;
  CLI::App *forward = app.add_subcommand("forward", "Simulate a far-field dataset from a JSON config");
  forward->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  forward->add_option("--out", data_out, "Dataset CSV to write")->required();

  std::vector<std::string> data_paths;
  std::string grid_spec, kind = "i1", field_out;
  CLI::App *inv = app.add_subcommand("invert", "Evaluate an indicator on a sampling grid");
  inv->add_option("--data", data_paths, "Dataset CSV files (pairs are concatenated)")->required()->expected(1, -1);
  inv->add_option("--grid", grid_spec, "cx,cy,h,nx,ny (default -4,-4,0.1,81,81)");
  inv->add_option("--indicator", kind, "i1 or i2")->check(CLI::IsMember({"i1", "i2"}));
  inv->add_option("--out", field_out, "Field CSV to write (sidecar .json alongside)")->required();

  std::string field_in, image_out;
  CLI::App *render = app.add_subcommand("render", "Render a field as an 8-bit PGM image");
  render->add_option("--field", field_in, "Field CSV")->required();
  render->add_option("--out", image_out, "PGM to write")->required();

  int example = 0;
  std::string variant, outdir;
  CLI::App *repro = app.add_subcommand("repro", "Run a built-in example end to end");
  repro->add_option("--example", example, "Example number")->required()->check(CLI::Range(1, 6));
  repro->add_option("--variant", variant, "Run name within the example (default: all)");
  repro->add_option("--outdir", outdir, "Directory receiving one folder per run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*forward) return cmd_forward(config_path, data_out, out);
    if (*inv) return cmd_invert(data_paths, grid_spec, kind, field_out, out);
    if (*render) return cmd_render(field_in, image_out, out);
    return cmd_repro(example, variant, outdir, out);
  } catch (const SolverError &e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace dsm::cli
