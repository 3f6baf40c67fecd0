#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dsm/indicators.hpp"

namespace dsm {

// Dataset CSV layout: '#'-prefixed provenance lines, then the header
//   theta_x,theta_y,xhat_x,xhat_y,k,re,im
// and one row per (pair, k), pair-major with ascending k. Numbers are
// written with 17 significant digits so that reading back is exact.

void write_dataset_csv(const FarFieldDataset &d, std::ostream &os);
/// Throws FormatError on malformed input.
FarFieldDataset read_dataset_csv(std::istream &is);

void save_dataset(const FarFieldDataset &d, const std::filesystem::path &path);
FarFieldDataset load_dataset(const std::filesystem::path &path);

/// Writes `contents` to a temporary file next to `path` and renames it over
/// `path`. Throws Error on I/O failure.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);

/// %.17g formatting.
std::string format_double(double v);

}  // namespace dsm
