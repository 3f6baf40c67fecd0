#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dsm/cli/config.hpp"

namespace dsm::cli {

struct ReproRun {
  std::string name;
  ExperimentConfig config;
};

/// Built-in runs of a numbered example (1..6). An empty `variant` selects all
/// runs; otherwise only the run with that name. Throws ConfigError for an
/// unknown example or variant.
std::vector<ReproRun> example_runs(int example, const std::string &variant = "");

/// Names of all runs of an example.
std::vector<std::string> example_variants(int example);

struct RunArtifacts {
  std::filesystem::path config;
  std::filesystem::path dataset;
  std::filesystem::path field;
  std::filesystem::path image;
};

/// File layout of one run below `outdir`.
RunArtifacts artifacts_for(const std::filesystem::path &outdir, const std::string &run);

/// forward -> invert -> render for one configuration; writes all artifacts.
void run_pipeline(const ExperimentConfig &config, const RunArtifacts &out);

}  // namespace dsm::cli
