#pragma once

#include <filesystem>
#include <string>

#include "dsm/indicators.hpp"

namespace dsm::cli {

/// CSV matrix: ny lines of nx comma-separated values, line j holding grid row j.
std::string field_to_csv(const IndicatorField &f);

/// JSON sidecar with corner, spacing, nx, ny, kind, variant and pair count.
std::string field_sidecar(const IndicatorField &f);

/// Path of the sidecar belonging to a field CSV (extension replaced by .json).
std::filesystem::path sidecar_path(const std::filesystem::path &csv);

/// Writes the CSV and its sidecar atomically.
void save_field(const IndicatorField &f, const std::filesystem::path &csv);

/// Reads a field CSV and its sidecar. Throws FormatError.
IndicatorField load_field(const std::filesystem::path &csv);

/// Binary PGM (P5, maxval 255), one pixel per grid cell, grid row ny-1 first.
/// Values are min-max normalised; a constant field renders black.
std::string render_pgm(const IndicatorField &f);

}  // namespace dsm::cli
