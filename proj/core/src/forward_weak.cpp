#include "dsm/forward_weak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsm/specfun.hpp"

namespace dsm {
namespace {

// delta * sum_{j=0}^{n-1} exp(i a delta (j - (n-1)/2)): the one-dimensional
// midpoint rule for int exp(i a s) ds over an interval of length n delta
// centred at zero. Real by symmetry.
double midpoint_factor(double a, double delta, long n) {
  const double half = 0.5 * a * delta;
  if (std::abs(half) < 1e-12) return delta * static_cast<double>(n);
  return delta * std::sin(static_cast<double>(n) * half) / std::sin(half);
}

// Boolean coverage of a closed polygon on a scanline grid: returns, for each
// subsample row, the sorted x-crossings.
std::vector<double> scanline_crossings(const std::vector<Vec2> &poly, double y) {
  std::vector<double> xs;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

PointScattererSet::PointScattererSet(std::vector<Vec2> pos, std::vector<Complex> tau)
    : positions(std::move(pos)), strengths(std::move(tau)) {
  if (positions.empty()) throw DomainError("point scatterer set is empty");
  if (positions.size() != strengths.size()) throw DomainError("positions and strengths differ in length");
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      if (positions[a] == positions[b]) throw DomainError("point scatterer positions must be distinct");
    }
  }
}

Complex foldy_far_field(const PointScattererSet &s, Vec2 xhat, Vec2 theta, double k) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  const Vec2 d = theta - xhat;
  Complex sum = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) sum += s.strengths[m] * cis(k * dot(s.positions[m], d));
  return sum;
}

MediumContrast MediumContrast::disk(Vec2 center, double radius, double contrast) {
  if (!(radius > 0.0)) throw DomainError("disk radius must be positive");
  if (!(contrast + 1.0 > 0.0)) throw DomainError("refractive index q = contrast + 1 must be positive");
  MediumContrast m;
  m.kind_ = Kind::disk;
  m.center_ = center;
  m.radius_ = radius;
  m.contrast_ = contrast;
  return m;
}

MediumContrast MediumContrast::grid(CellRaster raster, std::vector<double> values) {
  if (raster.nx < 1 || raster.ny < 1 || !(raster.cell > 0.0)) throw DomainError("invalid contrast raster");
  if (values.size() != raster.size()) throw DomainError("contrast values do not match raster size");
  for (double v : values) {
    if (!(v + 1.0 > 0.0)) throw DomainError("refractive index q = contrast + 1 must be positive");
  }
  MediumContrast m;
  m.kind_ = Kind::grid;
  m.raster_ = raster;
  m.values_ = std::move(values);
  return m;
}

MediumContrast MediumContrast::from_boundary(const ParametricBoundary &shape, double contrast, double cell,
                                             int supersample) {
  if (!(cell > 0.0) || supersample < 1) throw DomainError("invalid rasterisation parameters");
  const ParametricBoundary fine = shape.with_nodes(4096);
  std::vector<Vec2> poly;
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -1.0 * lo;
  for (const BoundaryNode &n : boundary_sample(fine)) {
    poly.push_back(n.point);
    lo = {std::min(lo.x, n.point.x), std::min(lo.y, n.point.y)};
    hi = {std::max(hi.x, n.point.x), std::max(hi.y, n.point.y)};
  }
  CellRaster r;
  r.cell = cell;
  r.corner = {lo.x - cell, lo.y - cell};
  r.nx = static_cast<int>(std::ceil((hi.x - lo.x) / cell)) + 2;
  r.ny = static_cast<int>(std::ceil((hi.y - lo.y) / cell)) + 2;

  std::vector<double> values(r.size(), 0.0);
  const double sub = cell / supersample;
  const double weight = contrast / (supersample * supersample);
  for (int j = 0; j < r.ny; ++j) {
    for (int sj = 0; sj < supersample; ++sj) {
      const double y = r.corner.y + j * cell + (sj + 0.5) * sub;
      const std::vector<double> xs = scanline_crossings(poly, y);
      for (std::size_t c = 0; c + 1 < xs.size(); c += 2) {
        // Subsample columns with centres inside [xs[c], xs[c+1]].
        const double first = (xs[c] - r.corner.x) / sub - 0.5;
        const double last = (xs[c + 1] - r.corner.x) / sub - 0.5;
        for (long s = static_cast<long>(std::ceil(first)); s <= static_cast<long>(std::floor(last)); ++s) {
          const long i = s / supersample;
          if (s < 0 || i >= r.nx) continue;
          values[r.index(static_cast<int>(i), j)] += weight;
        }
      }
    }
  }
  return grid(r, std::move(values));
}

MediumContrast MediumContrast::rasterized_disk(Vec2 center, double radius, double contrast, CellRaster raster,
                                               int supersample) {
  std::vector<double> values(raster.size(), 0.0);
  const double sub = raster.cell / supersample;
  for (int j = 0; j < raster.ny; ++j) {
    for (int i = 0; i < raster.nx; ++i) {
      const Vec2 c0 = raster.center(i, j);
      // Cells entirely inside/outside skip the supersampling.
      const double dist = norm(c0 - center);
      const double half_diag = raster.cell * std::sqrt(0.5);
      if (dist + half_diag <= radius) {
        values[raster.index(i, j)] = contrast;
        continue;
      }
      if (dist - half_diag >= radius) continue;
      int hits = 0;
      for (int sj = 0; sj < supersample; ++sj) {
        for (int si = 0; si < supersample; ++si) {
          const Vec2 p{raster.corner.x + i * raster.cell + (si + 0.5) * sub,
                       raster.corner.y + j * raster.cell + (sj + 0.5) * sub};
          if (norm(p - center) < radius) ++hits;
        }
      }
      values[raster.index(i, j)] = contrast * hits / (supersample * supersample);
    }
  }
  return grid(raster, std::move(values));
}

double MediumContrast::value_at(Vec2 p) const {
  if (kind_ == Kind::disk) return norm(p - center_) < radius_ ? contrast_ : 0.0;
  const double fx = (p.x - raster_.corner.x) / raster_.cell;
  const double fy = (p.y - raster_.corner.y) / raster_.cell;
  if (fx < 0.0 || fy < 0.0) return 0.0;
  const auto i = static_cast<long>(fx);
  const auto j = static_cast<long>(fy);
  if (i >= raster_.nx || j >= raster_.ny) return 0.0;
  return values_[raster_.index(static_cast<int>(i), static_cast<int>(j))];
}

double MediumContrast::max_index() const {
  if (kind_ == Kind::disk) return std::max(1.0, contrast_ + 1.0);
  double q = 1.0;
  for (double v : values_) q = std::max(q, v + 1.0);
  return q;
}

std::pair<Vec2, Vec2> MediumContrast::bounding_box() const {
  if (kind_ == Kind::disk) {
    return {center_ - Vec2{radius_, radius_}, center_ + Vec2{radius_, radius_}};
  }
  return {raster_.corner, raster_.upper()};
}

Complex disk_fourier_transform(Vec2 center, double radius, Vec2 d, double k) {
  const double s = k * norm(d);
  const Complex phase = cis(k * dot(d, center));
  if (s * radius < 1e-8) return phase * kPi * radius * radius;
  const double j1 = specfun::bessel_j01(s * radius).second;
  return phase * 2.0 * kPi * radius * j1 / s;
}

Complex born_far_field(const MediumContrast &m, Vec2 xhat, Vec2 theta, double k) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  const Vec2 d = theta - xhat;
  if (m.kind() == MediumContrast::Kind::disk) {
    return k * k * m.disk_contrast() * disk_fourier_transform(m.disk_center(), m.disk_radius(), d, k);
  }

  // Cell-centre phases do not depend on the refinement level; only the
  // per-cell midpoint factor does.
  const CellRaster &r = m.raster();
  Complex cell_sum = 0.0;
  for (int j = 0; j < r.ny; ++j) {
    for (int i = 0; i < r.nx; ++i) {
      const double v = m.values()[r.index(i, j)];
      if (v != 0.0) cell_sum += v * cis(k * dot(d, r.center(i, j)));
    }
  }
  constexpr int kMaxLevel = 24;
  const double wave = k * norm(d);
  Complex previous = 0.0;
  for (int level = 0; level <= kMaxLevel; ++level) {
    const long n = 1L << level;
    const double delta = r.cell / static_cast<double>(n);
    const Complex value =
        k * k * cell_sum * midpoint_factor(k * d.x, delta, n) * midpoint_factor(k * d.y, delta, n);
    const bool resolved = wave * delta <= 2.0;
    if (level > 0 && resolved && std::abs(value - previous) <= 1e-8 * std::abs(value)) return value;
    if (level > 0 && resolved && std::abs(value) == 0.0 && std::abs(previous) == 0.0) return value;
    previous = value;
  }
  if (wave * r.cell / static_cast<double>(1L << kMaxLevel) > 2.0) {
    throw SolverError("born_far_field: oscillation unresolved after maximal refinement");
  }
  return previous;
}

}  // namespace dsm
