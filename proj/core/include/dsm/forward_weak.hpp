#pragma once

#include <vector>

#include "dsm/common.hpp"
#include "dsm/geometry.hpp"

namespace dsm {

/// Point-like scatterers z_m with strengths tau_m.
struct PointScattererSet {
  std::vector<Vec2> positions;
  std::vector<Complex> strengths;

  PointScattererSet() = default;
  PointScattererSet(std::vector<Vec2> positions, std::vector<Complex> strengths);
  std::size_t size() const { return positions.size(); }
};

/// Far field of the single-scattering point model:
///   sum_m tau_m exp(i k z_m . (theta - xhat)).
Complex foldy_far_field(const PointScattererSet &s, Vec2 xhat, Vec2 theta, double k);

/// Uniform rectangular raster of cell values.
struct CellRaster {
  Vec2 corner;  // lower-left corner of cell (0, 0)
  double cell = 0.0;  // square cell side
  int nx = 0;
  int ny = 0;

  Vec2 center(int i, int j) const { return {corner.x + (i + 0.5) * cell, corner.y + (j + 0.5) * cell}; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  Vec2 upper() const { return {corner.x + nx * cell, corner.y + ny * cell}; }
};

/// Compactly supported contrast q - 1 (real, q > 0).
class MediumContrast {
 public:
  enum class Kind { disk, grid };

  static MediumContrast disk(Vec2 center, double radius, double contrast);
  /// Cell values of q - 1 on `raster`; every value must satisfy q > 0.
  static MediumContrast grid(CellRaster raster, std::vector<double> values);
  /// Area-weighted rasterisation of `contrast` over the domain enclosed by
  /// `shape`, on a raster just covering the shape.
  static MediumContrast from_boundary(const ParametricBoundary &shape, double contrast, double cell,
                                      int supersample = 8);
  /// Rasterise a disk onto `raster` by supersampled area fractions.
  static MediumContrast rasterized_disk(Vec2 center, double radius, double contrast, CellRaster raster,
                                        int supersample = 16);

  Kind kind() const { return kind_; }
  Vec2 disk_center() const { return center_; }
  double disk_radius() const { return radius_; }
  double disk_contrast() const { return contrast_; }
  const CellRaster &raster() const { return raster_; }
  const std::vector<double> &values() const { return values_; }

  /// q - 1 at a point.
  double value_at(Vec2 p) const;
  /// Largest refractive index q over the support.
  double max_index() const;
  /// Axis-aligned box containing the support.
  std::pair<Vec2, Vec2> bounding_box() const;

 private:
  Kind kind_ = Kind::disk;
  Vec2 center_;
  double radius_ = 0.0;
  double contrast_ = 0.0;
  CellRaster raster_;
  std::vector<double> values_;
};

/// Integral of exp(i k d . y) over the disk |y - center| < radius.
Complex disk_fourier_transform(Vec2 center, double radius, Vec2 d, double k);

/// Born far field k^2 * int exp(i k (theta - xhat) . y) (q - 1)(y) dy.
/// Disks use the closed form; grids use the composite midpoint rule with
/// dyadic refinement until successive levels agree to 1e-8.
Complex born_far_field(const MediumContrast &m, Vec2 xhat, Vec2 theta, double k);

/// Raster on which the volume equation is discretised.
struct LsRaster {
  Vec2 corner;
  double cell = 0.0;
  int n = 0;  // n x n cells

  static LsRaster covering(Vec2 lower, Vec2 upper, int n);
  CellRaster cells() const { return {corner, cell, n, n}; }
};

struct LsOptions {
  double tolerance = 1e-10;  // relative GMRES residual
  int restart = 60;
  int max_iterations = 2000;
  double points_per_wavelength = 10.0;
};

/// Total field on the raster for one plane wave and the far field it radiates.
class LsSolution {
 public:
  LsSolution(LsRaster raster, double k, Vec2 theta, std::vector<double> contrast,
             std::vector<Complex> total_field, int iterations, double residual);

  const LsRaster &raster() const { return raster_; }
  double wavenumber() const { return k_; }
  Vec2 theta() const { return theta_; }
  const std::vector<double> &contrast() const { return contrast_; }
  const std::vector<Complex> &total_field() const { return field_; }
  int iterations() const { return iterations_; }
  /// ||u - u_in - k^2 K[(q-1) u]|| / ||u_in|| at the returned field.
  double residual() const { return residual_; }

  /// k^2 * sum_cells h^2 exp(-i k xhat . y) (q - 1) u.
  Complex far_field(Vec2 xhat) const;

 private:
  LsRaster raster_;
  double k_;
  Vec2 theta_;
  std::vector<double> contrast_;
  std::vector<Complex> field_;
  int iterations_;
  double residual_;
};

/// Solves u = u_in + k^2 int Phi_k(x, y) (q - 1)(y) u(y) dy on the raster.
/// The self cell uses the kernel integrated over the equal-area disk; all
/// other cells use the midpoint rule. The discrete convolution is applied by
/// FFT and the system is solved with restarted GMRES.
/// Throws SolverError on under-resolution or non-convergence.
LsSolution lippmann_schwinger_solve(const MediumContrast &m, double k, Vec2 theta, const LsRaster &raster,
                                    const LsOptions &options = {});

/// Applies the discrete operator u -> u - k^2 K[c u] on the raster (testing aid).
std::vector<Complex> lippmann_schwinger_apply(const LsRaster &raster, double k, const std::vector<double> &contrast,
                                              const std::vector<Complex> &u);

}  // namespace dsm
