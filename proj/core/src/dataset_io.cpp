#include "dsm/dataset_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace dsm {
namespace {

constexpr const char *kHeader = "theta_x,theta_y,xhat_x,xhat_y,k,re,im";

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string &field, std::size_t line) {
  const std::string t = trim(field);
  char *end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw FormatError("line " + std::to_string(line) + ": '" + t + "' is not a number");
  }
  return v;
}

void parse_meta(const std::string &line, FarFieldDataset &d) {
  const std::string body = trim(line.substr(1));
  const auto colon = body.find(':');
  if (colon == std::string::npos) return;
  const std::string key = trim(body.substr(0, colon));
  const std::string value = trim(body.substr(colon + 1));
  std::istringstream vs(value);
  if (key == "model") {
    d.provenance.model = value;
  } else if (key == "noise_level") {
    vs >> d.provenance.noise_level;
  } else if (key == "seed") {
    vs >> d.provenance.seed;
  } else if (key == "band") {
    vs >> d.provenance.k_min >> d.provenance.k_max;
  } else if (key == "variant") {
    vs >> d.pairs.variant;
  }
  if (vs.fail() && key != "model") throw FormatError("malformed provenance entry '" + key + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset_csv(const FarFieldDataset &d, std::ostream &os) {
  d.validate();
  os << "# dsm far-field dataset\n";
  os << "# model: " << d.provenance.model << "\n";
  os << "# noise_level: " << format_double(d.provenance.noise_level) << "\n";
  os << "# seed: " << d.provenance.seed << "\n";
  os << "# band: " << format_double(d.provenance.k_min) << " " << format_double(d.provenance.k_max) << "\n";
  os << "# K: " << d.k_count() << "\n";
  os << "# variant: " << d.pairs.variant << "\n";
  os << kHeader << "\n";
  for (std::size_t p = 0; p < d.pair_count(); ++p) {
    const DirectionPair &pr = d.pairs.pairs[p];
    const std::string prefix = format_double(pr.theta.x) + "," + format_double(pr.theta.y) + "," +
                               format_double(pr.xhat.x) + "," + format_double(pr.xhat.y) + ",";
    for (std::size_t q = 0; q < d.k_count(); ++q) {
      const Complex v = d.value(p, q);
      os << prefix << format_double(d.wavenumbers[q]) << "," << format_double(v.real()) << ","
         << format_double(v.imag()) << "\n";
    }
  }
}

FarFieldDataset read_dataset_csv(std::istream &is) {
  FarFieldDataset d;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<std::vector<double>> pair_k;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      parse_meta(t, d);
      continue;
    }
    if (!header_seen) {
      if (t != kHeader) throw FormatError("line " + std::to_string(lineno) + ": expected header '" + kHeader + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 7) throw FormatError("line " + std::to_string(lineno) + ": expected 7 columns");
    double v[7];
    for (std::size_t c = 0; c < 7; ++c) v[c] = parse_double(fields[c], lineno);
    const Vec2 theta{v[0], v[1]};
    const Vec2 xhat{v[2], v[3]};
    // A row starts a new pair when the directions change or k restarts.
    const bool new_pair = d.pairs.pairs.empty() || !(d.pairs.pairs.back().theta == theta) ||
                          !(d.pairs.pairs.back().xhat == xhat) || !(v[4] > pair_k.back().back());
    if (new_pair) {
      d.pairs.pairs.push_back({xhat, theta});
      pair_k.emplace_back();
    }
    pair_k.back().push_back(v[4]);
    d.values.emplace_back(v[5], v[6]);
  }
  if (!header_seen) throw FormatError("missing dataset header");
  if (d.pairs.pairs.empty()) throw FormatError("dataset has no rows");
  for (const std::vector<double> &ks : pair_k) {
    if (ks != pair_k.front()) throw FormatError("pairs do not share one wavenumber list");
  }
  d.wavenumbers = pair_k.front();
  for (const DirectionPair &p : d.pairs.pairs) {
    if (std::abs(norm(p.xhat) - 1.0) > 1e-9 || std::abs(norm(p.theta) - 1.0) > 1e-9) {
      throw FormatError("dataset contains a non-unit direction");
    }
  }
  d.validate();
  return d;
}

void save_dataset(const FarFieldDataset &d, const std::filesystem::path &path) {
  std::ostringstream os;
  write_dataset_csv(d, os);
  write_file_atomic(path, os.str());
}

FarFieldDataset load_dataset(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset '" + path.string() + "'");
  try {
    return read_dataset_csv(in);
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

}  // namespace dsm
