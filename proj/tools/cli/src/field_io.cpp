#include "dsm/cli/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dsm/dataset_io.hpp"
#include "json.hpp"

namespace dsm::cli {
namespace {

std::string read_text(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string field_to_csv(const IndicatorField &f) {
  std::string out;
  out.reserve(f.values.size() * 24);
  for (int j = 0; j < f.grid.ny; ++j) {
    for (int i = 0; i < f.grid.nx; ++i) {
      if (i > 0) out += ',';
      out += format_double(f.at(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string field_sidecar(const IndicatorField &f) {
  nlohmann::ordered_json o;
  o["corner"] = {f.grid.corner.x, f.grid.corner.y};
  o["spacing"] = f.grid.spacing;
  o["nx"] = f.grid.nx;
  o["ny"] = f.grid.ny;
  o["kind"] = f.kind == IndicatorKind::i1 ? "i1" : "i2";
  o["variant"] = f.variant;
  o["pairs"] = f.pair_count;
  return o.dump(2) + "\n";
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv) {
  std::filesystem::path p = csv;
  return p.replace_extension(".json");
}

void save_field(const IndicatorField &f, const std::filesystem::path &csv) {
  write_file_atomic(csv, field_to_csv(f));
  write_file_atomic(sidecar_path(csv), field_sidecar(f));
}

IndicatorField load_field(const std::filesystem::path &csv) {
  IndicatorField f;
  try {
    const nlohmann::json side = nlohmann::json::parse(read_text(sidecar_path(csv)));
    f.grid = SamplingGrid({side.at("corner").at(0).get<double>(), side.at("corner").at(1).get<double>()},
                          side.at("spacing").get<double>(), side.at("nx").get<int>(), side.at("ny").get<int>());
    const std::string kind = side.at("kind").get<std::string>();
    if (kind != "i1" && kind != "i2") throw FormatError("unknown indicator kind '" + kind + "'");
    f.kind = kind == "i1" ? IndicatorKind::i1 : IndicatorKind::i2;
    f.variant = side.value("variant", 1);
    f.pair_count = side.value("pairs", std::size_t{0});
  } catch (const nlohmann::json::exception &e) {
    throw FormatError("bad field sidecar for '" + csv.string() + "': " + e.what());
  } catch (const DomainError &e) {
    throw FormatError("bad field sidecar for '" + csv.string() + "': " + e.what());
  }
  std::istringstream in(read_text(csv));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ls, cell, ',')) {
      char *end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw FormatError(csv.string() + ": row " + std::to_string(rows + 1) + ": '" + cell + "' is not a number");
      }
      f.values.push_back(v);
      ++cols;
    }
    if (cols != f.grid.nx) throw FormatError(csv.string() + ": row " + std::to_string(rows + 1) + " has wrong width");
    ++rows;
  }
  if (rows != f.grid.ny) throw FormatError(csv.string() + ": expected " + std::to_string(f.grid.ny) + " rows");
  return f;
}

std::string render_pgm(const IndicatorField &f) {
  if (f.values.size() != f.grid.size() || f.values.empty()) throw FormatError("field size does not match its grid");
  const auto [lo_it, hi_it] = std::minmax_element(f.values.begin(), f.values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  std::string out = "P5\n" + std::to_string(f.grid.nx) + " " + std::to_string(f.grid.ny) + "\n255\n";
  for (int j = f.grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < f.grid.nx; ++i) {
      const double t = span > 0.0 ? (f.at(i, j) - lo) / span : 0.0;
      out += static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0)));
    }
  }
  return out;
}

}  // namespace dsm::cli
