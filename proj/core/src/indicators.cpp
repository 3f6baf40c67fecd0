#include "dsm/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "dsm/forward_kirchhoff.hpp"
#include "dsm/parallel.hpp"

namespace dsm {
namespace {

constexpr double kPairTol = 1e-9;

bool same_direction(Vec2 a, Vec2 b, double tol) { return norm(a - b) <= tol; }

std::vector<Vec2> unique_thetas(const std::vector<DirectionPair> &pairs, std::vector<std::size_t> &slot) {
  std::vector<Vec2> out;
  slot.resize(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    std::size_t s = 0;
    while (s < out.size() && !same_direction(out[s], pairs[p].theta, 1e-12)) ++s;
    if (s == out.size()) out.push_back(pairs[p].theta);
    slot[p] = s;
  }
  return out;
}

DirectionPairSet with_mirrors(const DirectionPairSet &in) {
  DirectionPairSet out = in;
  for (const DirectionPair &p : in.pairs) {
    const DirectionPair m = p.mirrored();
    const bool present = std::any_of(out.pairs.begin(), out.pairs.end(), [&](const DirectionPair &q) {
      return same_direction(q.xhat, m.xhat, kPairTol) && same_direction(q.theta, m.theta, kPairTol);
    });
    if (!present) out.pairs.push_back(m);
  }
  return out;
}

LsRaster default_raster(const MediumContrast &m, double k_max, double ppw) {
  const auto [lo, hi] = m.bounding_box();
  const double side = std::max(hi.x - lo.x, hi.y - lo.y);
  const double wavelength = 2.0 * kPi / (k_max * std::sqrt(m.max_index()));
  const int n = std::max(16, static_cast<int>(std::ceil(side * ppw / wavelength)));
  return LsRaster::covering(lo, lo + Vec2{side, side}, n);
}

// Collects per-cell failure messages from concurrent jobs.
class FailureLog {
 public:
  void add(const std::string &cell, const std::string &what) {
    const std::lock_guard lock(mutex_);
    lines_.push_back(cell + ": " + what);
  }
  void throw_if_any() const {
    if (lines_.empty()) return;
    std::ostringstream os;
    constexpr std::size_t kShown = 20;
    std::vector<std::string> sorted = lines_;
    std::sort(sorted.begin(), sorted.end());
    os << "forward model failed in " << sorted.size() << " solve(s)";
    for (std::size_t i = 0; i < std::min(kShown, sorted.size()); ++i) os << "\n  " << sorted[i];
    if (sorted.size() > kShown) os << "\n  ... " << sorted.size() - kShown << " more";
    throw SolverError(os.str());
  }

 private:
  std::mutex mutex_;
  std::vector<std::string> lines_;
};

std::string format_k(double k) {
  std::ostringstream os;
  os << k;
  return os.str();
}

std::string cell_name(std::size_t pair, double k) { return "pair " + std::to_string(pair) + ", k = " + format_k(k); }

void require_scene(const Scene &scene, Scene::Kind kind, ForwardModel model) {
  if (scene.kind != kind) throw DomainError("forward model '" + to_string(model) + "' does not apply to this scene");
}

// Trapezoid weights on arbitrary increasing nodes.
std::vector<double> trapezoid_weights(const std::vector<double> &k) {
  if (k.size() < 2) throw DomainError("the k-integral needs at least two wavenumbers");
  std::vector<double> w(k.size());
  w.front() = 0.5 * (k[1] - k[0]);
  w.back() = 0.5 * (k[k.size() - 1] - k[k.size() - 2]);
  for (std::size_t q = 1; q + 1 < k.size(); ++q) w[q] = 0.5 * (k[q + 1] - k[q - 1]);
  return w;
}

// Weighted integrand per pair: weights[q] * combined value.
struct Integrand {
  std::vector<Vec2> phase;  // theta - xhat per pair
  std::vector<double> k;
  std::vector<Complex> c;  // pair-major

  double evaluate(std::size_t p, Vec2 z) const {
    const double s = dot(z, phase[p]);
    const std::size_t kc = k.size();
    Complex sum = 0.0;
    for (std::size_t q = 0; q < kc; ++q) sum += c[p * kc + q] * cis(-k[q] * s);
    return std::abs(sum);
  }
};

Integrand integrand_i1(const FarFieldDataset &d) {
  const std::vector<double> w = trapezoid_weights(d.wavenumbers);
  Integrand f;
  f.k = d.wavenumbers;
  f.c.resize(d.values.size());
  for (std::size_t p = 0; p < d.pair_count(); ++p) {
    f.phase.push_back(d.pairs.pairs[p].phase_vector());
    for (std::size_t q = 0; q < d.k_count(); ++q) f.c[p * d.k_count() + q] = w[q] * d.value(p, q);
  }
  return f;
}

Integrand integrand_i2(const FarFieldDataset &d, const FarFieldDataset &mirror) {
  Integrand f = integrand_i1(d);
  const std::vector<double> w = trapezoid_weights(d.wavenumbers);
  std::vector<std::size_t> kmap(d.k_count());
  for (std::size_t q = 0; q < d.k_count(); ++q) {
    const double k = d.wavenumbers[q];
    const auto it = std::find_if(mirror.wavenumbers.begin(), mirror.wavenumbers.end(),
                                 [&](double km) { return std::abs(km - k) <= 1e-12 * std::max(1.0, k); });
    if (it == mirror.wavenumbers.end()) throw DomainError("mirror dataset lacks wavenumber " + std::to_string(k));
    kmap[q] = static_cast<std::size_t>(it - mirror.wavenumbers.begin());
  }
  for (std::size_t p = 0; p < d.pair_count(); ++p) {
    const DirectionPair m = d.pairs.pairs[p].mirrored();
    const std::optional<std::size_t> mp = find_pair(mirror, m.xhat, m.theta);
    if (!mp) {
      std::ostringstream os;
      os << "mirror pair missing for pair " << p << " (xhat = (" << m.xhat.x << ", " << m.xhat.y << "), theta = ("
         << m.theta.x << ", " << m.theta.y << "))";
      throw DomainError(os.str());
    }
    for (std::size_t q = 0; q < d.k_count(); ++q) {
      f.c[p * d.k_count() + q] += w[q] * std::conj(mirror.value(*mp, kmap[q]));
    }
  }
  return f;
}

IndicatorField evaluate_field(const Integrand &f, const FarFieldDataset &d, const SamplingGrid &grid,
                              IndicatorKind kind) {
  IndicatorField field;
  field.grid = grid;
  field.kind = kind;
  field.variant = d.pairs.variant;
  field.pair_count = d.pair_count();
  field.values.assign(grid.size(), 0.0);
  parallel_for(static_cast<std::size_t>(grid.ny), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < grid.nx; ++i) {
      double sum = 0.0;
      for (std::size_t p = 0; p < d.pair_count(); ++p) sum += f.evaluate(p, grid.point(i, j));
      field.values[grid.index(i, j)] = sum;
    }
  });
  return field;
}

Profile evaluate_profile(const Integrand &f, std::size_t pair, const ProfileLine &line) {
  if (!(line.step > 0.0) || !(line.extent >= 0.0)) throw DomainError("invalid profile line");
  const Vec2 dir = normalized(line.direction);
  const auto steps = static_cast<long>(std::floor(line.extent / line.step + 1e-9));
  Profile out;
  for (long s = -steps; s <= steps; ++s) {
    const double a = static_cast<double>(s) * line.step;
    out.abscissa.push_back(a);
    out.values.push_back(f.evaluate(pair, line.anchor + a * dir));
  }
  return out;
}

void check_pair_index(const FarFieldDataset &d, std::size_t pair) {
  if (pair >= d.pair_count()) throw DomainError("pair index out of range");
}

}  // namespace

Scene Scene::point_set(PointScattererSet s) {
  Scene sc;
  sc.kind = Kind::points;
  sc.points = std::move(s);
  return sc;
}

Scene Scene::penetrable(MediumContrast m) {
  Scene sc;
  sc.kind = Kind::medium;
  sc.medium = std::move(m);
  return sc;
}

Scene Scene::penetrable_body(PenetrableBody b) {
  if (!(b.contrast + 1.0 > 0.0)) throw DomainError("contrast must satisfy q = contrast + 1 > 0");
  Scene sc;
  sc.kind = Kind::body;
  sc.body = std::move(b);
  return sc;
}

Scene Scene::obstacle_set(std::vector<ObstacleComponent> components) {
  if (components.empty()) throw DomainError("obstacle scene has no components");
  Scene sc;
  sc.kind = Kind::obstacles;
  sc.obstacles = std::move(components);
  return sc;
}

std::string to_string(ForwardModel m) {
  switch (m) {
    case ForwardModel::foldy:
      return "foldy";
    case ForwardModel::born:
      return "born";
    case ForwardModel::lippmann_schwinger:
      return "lippmann_schwinger";
    case ForwardModel::bie:
      return "bie";
    case ForwardModel::kirchhoff:
      return "kirchhoff";
  }
  return "unknown";
}

ForwardModel forward_model_from_string(const std::string &name) {
  for (ForwardModel m : {ForwardModel::foldy, ForwardModel::born, ForwardModel::lippmann_schwinger, ForwardModel::bie,
                         ForwardModel::kirchhoff}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown forward model '" + name + "'");
}

void FarFieldDataset::validate() const {
  if (pairs.pairs.empty()) throw FormatError("dataset has no direction pairs");
  if (wavenumbers.empty()) throw FormatError("dataset has no wavenumbers");
  for (std::size_t q = 1; q < wavenumbers.size(); ++q) {
    if (!(wavenumbers[q] > wavenumbers[q - 1])) throw FormatError("wavenumbers are not strictly increasing");
  }
  if (values.size() != pair_count() * k_count()) throw FormatError("value array does not match pairs x wavenumbers");
}

std::vector<double> wavenumber_band(double k_min, double k_max, int count) {
  if (count < 2) throw DomainError("a frequency band needs at least two wavenumbers");
  if (!(k_min > 0.0) || !(k_max > k_min)) throw DomainError("band must satisfy 0 < k_min < k_max");
  std::vector<double> k(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) k[static_cast<std::size_t>(i)] = k_min + i * (k_max - k_min) / (count - 1);
  k.back() = k_max;
  return k;
}

FarFieldDataset assemble_dataset(const Scene &scene, const DirectionPairSet &pairs, double k_min, double k_max,
                                 int count, ForwardModel model, const AssemblyOptions &options) {
  FarFieldDataset d;
  d.wavenumbers = wavenumber_band(k_min, k_max, count);
  d.pairs = options.include_mirrors ? with_mirrors(pairs) : pairs;
  if (d.pairs.pairs.empty()) throw DomainError("direction pair set is empty");
  d.provenance = {to_string(model), 0.0, 0, k_min, k_max};
  const std::size_t np = d.pair_count();
  const std::size_t nk = d.k_count();
  d.values.assign(np * nk, Complex{});
  const std::vector<DirectionPair> &pp = d.pairs.pairs;
  FailureLog failures;

  switch (model) {
    case ForwardModel::foldy:
    case ForwardModel::born:
    case ForwardModel::kirchhoff: {
      if (model == ForwardModel::foldy) require_scene(scene, Scene::Kind::points, model);
      if (model == ForwardModel::born) require_scene(scene, Scene::Kind::medium, model);
      std::vector<KirchhoffConfig> configs;
      if (model == ForwardModel::kirchhoff) {
        require_scene(scene, Scene::Kind::obstacles, model);
        for (const ObstacleComponent &c : scene.obstacles) {
          configs.push_back(KirchhoffConfig::from_condition(c.boundary, c.condition));
        }
      }
      parallel_for(np * nk, [&](std::size_t cell) {
        const std::size_t p = cell / nk;
        const std::size_t q = cell % nk;
        const double k = d.wavenumbers[q];
        try {
          if (model == ForwardModel::foldy) {
            d.values[cell] = foldy_far_field(scene.points, pp[p].xhat, pp[p].theta, k);
          } else if (model == ForwardModel::born) {
            d.values[cell] = born_far_field(scene.medium, pp[p].xhat, pp[p].theta, k);
          } else {
            Complex sum = 0.0;
            for (const KirchhoffConfig &c : configs) sum += kirchhoff_far_field(c, pp[p].xhat, pp[p].theta, k);
            d.values[cell] = sum;
          }
        } catch (const Error &e) {
          failures.add(cell_name(p, k), e.what());
        }
      }, options.workers);
      break;
    }
    case ForwardModel::bie: {
      std::vector<std::size_t> slot;
      const std::vector<Vec2> thetas = unique_thetas(pp, slot);
      if (scene.kind == Scene::Kind::body) {
        parallel_for(nk, [&](std::size_t q) {
          const double k = d.wavenumbers[q];
          try {
            const std::vector<TransmissionSolution> sols =
                solve_transmission(scene.body->boundary, 1.0 + scene.body->contrast, k, thetas);
            for (std::size_t p = 0; p < np; ++p) d.values[p * nk + q] = far_field_from_traces(sols[slot[p]], pp[p].xhat);
          } catch (const Error &e) {
            failures.add("all " + std::to_string(np) + " pairs at k = " + format_k(k), e.what());
          }
        }, options.workers);
        break;
      }
      require_scene(scene, Scene::Kind::obstacles, model);
      const std::size_t nc = scene.obstacles.size();
      // Per-component contributions, summed afterwards in component order.
      std::vector<std::vector<Complex>> parts(nc, std::vector<Complex>(np * nk));
      parallel_for(nc * nk, [&](std::size_t job) {
        const std::size_t c = job / nk;
        const std::size_t q = job % nk;
        const double k = d.wavenumbers[q];
        const ObstacleComponent &comp = scene.obstacles[c];
        try {
          const std::vector<BoundarySolution> sols = solve_obstacle(comp.boundary, comp.condition, k, thetas);
          for (std::size_t p = 0; p < np; ++p) parts[c][p * nk + q] = far_field_from_traces(sols[slot[p]], pp[p].xhat);
        } catch (const Error &e) {
          failures.add("all " + std::to_string(np) + " pairs at k = " + format_k(k) + ", component " +
                           std::to_string(c),
                       e.what());
        }
      }, options.workers);
      for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] += parts[c][i];
      }
      break;
    }
    case ForwardModel::lippmann_schwinger: {
      require_scene(scene, Scene::Kind::medium, model);
      const LsRaster raster =
          options.raster ? *options.raster : default_raster(scene.medium, k_max, options.ls.points_per_wavelength);
      std::vector<std::size_t> slot;
      const std::vector<Vec2> thetas = unique_thetas(pp, slot);
      parallel_for(thetas.size() * nk, [&](std::size_t job) {
        const std::size_t t = job / nk;
        const std::size_t q = job % nk;
        const double k = d.wavenumbers[q];
        try {
          const LsSolution sol = lippmann_schwinger_solve(scene.medium, k, thetas[t], raster, options.ls);
          for (std::size_t p = 0; p < np; ++p) {
            if (slot[p] == t) d.values[p * nk + q] = sol.far_field(pp[p].xhat);
          }
        } catch (const Error &e) {
          for (std::size_t p = 0; p < np; ++p) {
            if (slot[p] == t) failures.add(cell_name(p, k), e.what());
          }
        }
      }, options.workers);
      break;
    }
  }
  failures.throw_if_any();
  return d;
}

FarFieldDataset perturb_noise(const FarFieldDataset &d, double level, std::uint64_t seed) {
  if (!(level >= 0.0 && level < 1.0)) throw DomainError("noise level must lie in [0, 1)");
  FarFieldDataset out = d;
  out.provenance.noise_level = level;
  out.provenance.seed = seed;
  if (level == 0.0) return out;
  std::mt19937_64 rng(seed);
  // 53 random bits mapped to [-1, 1); identical on every platform.
  auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  for (Complex &v : out.values) {
    const double z1 = uniform();
    const double z2 = uniform();
    v *= Complex{1.0 + level * z1, level * z2};
  }
  return out;
}

FarFieldDataset superpose_datasets(std::span<const FarFieldDataset> parts) {
  if (parts.empty()) throw DomainError("nothing to superpose");
  FarFieldDataset out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const FarFieldDataset &d = parts[i];
    if (d.wavenumbers != out.wavenumbers || d.pair_count() != out.pair_count()) {
      throw DomainError("superposed datasets must share pairs and wavenumbers");
    }
    for (std::size_t p = 0; p < d.pair_count(); ++p) {
      if (!(d.pairs.pairs[p].xhat == out.pairs.pairs[p].xhat) || !(d.pairs.pairs[p].theta == out.pairs.pairs[p].theta)) {
        throw DomainError("superposed datasets must share pairs and wavenumbers");
      }
    }
    for (std::size_t v = 0; v < out.values.size(); ++v) out.values[v] += d.values[v];
    out.provenance.model += "+" + d.provenance.model;
  }
  return out;
}

FarFieldDataset merge_datasets(std::span<const FarFieldDataset> parts) {
  if (parts.empty()) throw DomainError("nothing to merge");
  FarFieldDataset out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const FarFieldDataset &d = parts[i];
    if (d.wavenumbers.size() != out.wavenumbers.size()) throw DomainError("datasets use different wavenumbers");
    for (std::size_t q = 0; q < d.wavenumbers.size(); ++q) {
      if (std::abs(d.wavenumbers[q] - out.wavenumbers[q]) > 1e-12 * std::max(1.0, out.wavenumbers[q])) {
        throw DomainError("datasets use different wavenumbers");
      }
    }
    out.pairs.pairs.insert(out.pairs.pairs.end(), d.pairs.pairs.begin(), d.pairs.pairs.end());
    out.pairs.directions.insert(out.pairs.directions.end(), d.pairs.directions.begin(), d.pairs.directions.end());
    out.pairs.dropped_degenerate += d.pairs.dropped_degenerate;
    if (d.pairs.variant != out.pairs.variant) out.pairs.variant = 3;
    if (d.provenance.model != out.provenance.model) out.provenance.model += "+" + d.provenance.model;
    out.values.insert(out.values.end(), d.values.begin(), d.values.end());
  }
  return out;
}

std::optional<std::size_t> find_pair(const FarFieldDataset &d, Vec2 xhat, Vec2 theta) {
  for (std::size_t p = 0; p < d.pair_count(); ++p) {
    const DirectionPair &q = d.pairs.pairs[p];
    if (same_direction(q.xhat, xhat, kPairTol) && same_direction(q.theta, theta, kPairTol)) return p;
  }
  return std::nullopt;
}

IndicatorField indicator_I1(const FarFieldDataset &d, const SamplingGrid &grid) {
  d.validate();
  return evaluate_field(integrand_i1(d), d, grid, IndicatorKind::i1);
}

IndicatorField indicator_I2(const FarFieldDataset &d, const FarFieldDataset &mirror, const SamplingGrid &grid) {
  d.validate();
  mirror.validate();
  return evaluate_field(integrand_i2(d, mirror), d, grid, IndicatorKind::i2);
}

double single_pair_indicator(const FarFieldDataset &d, std::size_t pair, Vec2 z) {
  check_pair_index(d, pair);
  return integrand_i1(d).evaluate(pair, z);
}

Profile indicator_profile(const FarFieldDataset &d, std::size_t pair, const ProfileLine &line) {
  check_pair_index(d, pair);
  return evaluate_profile(integrand_i1(d), pair, line);
}

Profile indicator_profile(const FarFieldDataset &d, const FarFieldDataset &mirror, std::size_t pair,
                          const ProfileLine &line) {
  check_pair_index(d, pair);
  return evaluate_profile(integrand_i2(d, mirror), pair, line);
}

}  // namespace dsm
