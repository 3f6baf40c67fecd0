#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "dsm/forward_weak.hpp"
#include "dsm/specfun.hpp"
#include "gmres.hpp"

namespace dsm {
namespace {

using detail::CVec;

// Smallest 2^a 3^b 5^c >= m.
int smooth_size(int m) {
  for (int p = m;; ++p) {
    int r = p;
    for (int f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return p;
  }
}

// Square 2D FFT of side p on an FFTW-owned buffer. Plans use FFTW_ESTIMATE
// so the algorithm, and hence every rounding, is the same on every run.
class Fft2 {
 public:
  explicit Fft2(int p, int live) : p_(p) {
    const auto size = static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
    data_ = reinterpret_cast<Complex *>(fftw_alloc_complex(size));
    std::fill_n(data_, size, Complex{});
    auto *d = reinterpret_cast<fftw_complex *>(data_);
    const std::lock_guard lock(planner_mutex());
    // Rows [0, live) with unit stride; all columns with stride p.
    rows_fwd_ = fftw_plan_many_dft(1, &p_, live, d, nullptr, 1, p, d, nullptr, 1, p, FFTW_FORWARD, FFTW_ESTIMATE);
    rows_inv_ = fftw_plan_many_dft(1, &p_, live, d, nullptr, 1, p, d, nullptr, 1, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    cols_fwd_ = fftw_plan_many_dft(1, &p_, p, d, nullptr, p, 1, d, nullptr, p, 1, FFTW_FORWARD, FFTW_ESTIMATE);
    cols_inv_ = fftw_plan_many_dft(1, &p_, p, d, nullptr, p, 1, d, nullptr, p, 1, FFTW_BACKWARD, FFTW_ESTIMATE);
    all_rows_ = fftw_plan_many_dft(1, &p_, p, d, nullptr, 1, p, d, nullptr, 1, p, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  Fft2(const Fft2 &) = delete;
  Fft2 &operator=(const Fft2 &) = delete;
  ~Fft2() {
    const std::lock_guard lock(planner_mutex());
    for (fftw_plan plan : {rows_fwd_, rows_inv_, cols_fwd_, cols_inv_, all_rows_}) fftw_destroy_plan(plan);
    fftw_free(data_);
  }

  Complex *data() { return data_; }

  // Rows at or beyond `live` must be zero.
  void forward() {
    fftw_execute(rows_fwd_);
    fftw_execute(cols_fwd_);
  }
  void forward_full() {
    fftw_execute(all_rows_);
    fftw_execute(cols_fwd_);
  }
  // Unnormalised; only rows below `live` are transformed back.
  void inverse() {
    fftw_execute(cols_inv_);
    fftw_execute(rows_inv_);
  }

 private:
  static std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
  }

  int p_;
  Complex *data_ = nullptr;
  fftw_plan rows_fwd_, rows_inv_, cols_fwd_, cols_inv_, all_rows_;
};

// Convolution with the cell-integrated Green's function on an n x n raster.
class VolumeOperator {
 public:
  VolumeOperator(const LsRaster &raster, double k)
      : n_(raster.n), p_(smooth_size(2 * raster.n - 1)), fft_(p_, n_) {
    const double h = raster.cell;
    const auto p = static_cast<std::size_t>(p_);
    // Self cell: Phi_k integrated over the disk of equal area,
    //   (i pi a / (2k)) H1(ka) - 1/k^2,  a = h / sqrt(pi).
    const double a = h / std::sqrt(kPi);
    const specfun::BesselJY01 ha = specfun::bessel_jy01(k * a);
    const Complex self = kI * kPi * a / (2.0 * k) * ha.h1() - 1.0 / (k * k);
    Complex *w = fft_.data();
    for (int dy = -(n_ - 1); dy <= n_ - 1; ++dy) {
      for (int dx = -(n_ - 1); dx <= n_ - 1; ++dx) {
        const std::size_t row = static_cast<std::size_t>((dy + p_) % p_);
        const std::size_t col = static_cast<std::size_t>((dx + p_) % p_);
        Complex g;
        if (dx == 0 && dy == 0) {
          g = self;
        } else {
          const double r = h * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
          g = 0.25 * kI * specfun::bessel_jy01(k * r).h0() * h * h;
        }
        w[row * p + col] = g;
      }
    }
    fft_.forward_full();
    // Fold the inverse transform's 1 / p^2 into the kernel.
    const double scale = 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    kernel_.assign(w, w + p * p);
    for (Complex &z : kernel_) z *= scale;
  }

  // sum_j G(i - j) x_j for x on the n x n raster.
  CVec convolve(const CVec &x) {
    const auto p = static_cast<std::size_t>(p_);
    const auto n = static_cast<std::size_t>(n_);
    Complex *w = fft_.data();
    std::fill_n(w, p * p, Complex{});
    for (std::size_t j = 0; j < n; ++j) std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(j * n), n, w + j * p);
    fft_.forward();
    for (std::size_t i = 0; i < p * p; ++i) w[i] *= kernel_[i];
    fft_.inverse();
    CVec y(n * n);
    for (std::size_t j = 0; j < n; ++j) std::copy_n(w + j * p, n, y.begin() + static_cast<std::ptrdiff_t>(j * n));
    return y;
  }

 private:
  int n_;
  int p_;
  Fft2 fft_;
  CVec kernel_;
};

std::vector<double> sample_contrast(const MediumContrast &m, const LsRaster &raster) {
  const CellRaster cells = raster.cells();
  if (m.kind() == MediumContrast::Kind::disk) {
    return MediumContrast::rasterized_disk(m.disk_center(), m.disk_radius(), m.disk_contrast(), cells).values();
  }
  // Average of the medium over 8 x 8 subsamples per raster cell.
  constexpr int s = 8;
  std::vector<double> values(cells.size(), 0.0);
  const double sub = cells.cell / s;
  for (int j = 0; j < cells.ny; ++j) {
    for (int i = 0; i < cells.nx; ++i) {
      double sum = 0.0;
      for (int sj = 0; sj < s; ++sj) {
        for (int si = 0; si < s; ++si) {
          sum += m.value_at({cells.corner.x + i * cells.cell + (si + 0.5) * sub,
                             cells.corner.y + j * cells.cell + (sj + 0.5) * sub});
        }
      }
      values[cells.index(i, j)] = sum / (s * s);
    }
  }
  return values;
}

CVec apply_operator(VolumeOperator &op, double k, const std::vector<double> &contrast, const CVec &u) {
  CVec cu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) cu[i] = contrast[i] * u[i];
  CVec y = op.convolve(cu);
  for (std::size_t i = 0; i < u.size(); ++i) y[i] = u[i] - k * k * y[i];
  return y;
}

}  // namespace

LsRaster LsRaster::covering(Vec2 lower, Vec2 upper, int n) {
  if (n < 2) throw DomainError("raster needs at least 2 x 2 cells");
  const double side = std::max(upper.x - lower.x, upper.y - lower.y);
  if (!(side > 0.0)) throw DomainError("raster box is empty");
  return {lower, side / n, n};
}

LsSolution::LsSolution(LsRaster raster, double k, Vec2 theta, std::vector<double> contrast,
                       std::vector<Complex> total_field, int iterations, double residual)
    : raster_(raster),
      k_(k),
      theta_(theta),
      contrast_(std::move(contrast)),
      field_(std::move(total_field)),
      iterations_(iterations),
      residual_(residual) {}

Complex LsSolution::far_field(Vec2 xhat) const {
  const CellRaster cells = raster_.cells();
  Complex sum = 0.0;
  for (int j = 0; j < cells.ny; ++j) {
    for (int i = 0; i < cells.nx; ++i) {
      const std::size_t idx = cells.index(i, j);
      if (contrast_[idx] == 0.0) continue;
      sum += contrast_[idx] * field_[idx] * cis(-k_ * dot(xhat, cells.center(i, j)));
    }
  }
  return k_ * k_ * cells.cell * cells.cell * sum;
}

std::vector<Complex> lippmann_schwinger_apply(const LsRaster &raster, double k, const std::vector<double> &contrast,
                                              const std::vector<Complex> &u) {
  VolumeOperator op(raster, k);
  return apply_operator(op, k, contrast, u);
}

LsSolution lippmann_schwinger_solve(const MediumContrast &m, double k, Vec2 theta, const LsRaster &raster,
                                    const LsOptions &options) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  if (raster.n < 2 || !(raster.cell > 0.0)) throw DomainError("invalid raster");

  const double wavelength = 2.0 * kPi / (k * std::sqrt(m.max_index()));
  if (raster.cell * options.points_per_wavelength > wavelength * (1.0 + 1e-12)) {
    throw SolverError("lippmann_schwinger_solve: raster under-resolves the interior wavelength (" +
                      std::to_string(wavelength / raster.cell) + " points per wavelength)");
  }
  const auto [lo, hi] = m.bounding_box();
  const Vec2 rhi = raster.cells().upper();
  const double slack = 1e-12;
  if (lo.x < raster.corner.x - slack || lo.y < raster.corner.y - slack || hi.x > rhi.x + slack ||
      hi.y > rhi.y + slack) {
    throw DomainError("lippmann_schwinger_solve: raster does not cover the contrast support");
  }

  const CellRaster cells = raster.cells();
  std::vector<double> contrast = sample_contrast(m, raster);
  CVec incident(cells.size());
  for (int j = 0; j < cells.ny; ++j) {
    for (int i = 0; i < cells.nx; ++i) incident[cells.index(i, j)] = cis(k * dot(cells.center(i, j), theta));
  }

  VolumeOperator op(raster, k);
  auto apply = [&](const CVec &u) { return apply_operator(op, k, contrast, u); };
  CVec u = incident;
  const detail::GmresResult res =
      detail::gmres(apply, incident, u, options.tolerance, options.restart, options.max_iterations);
  if (!res.converged) {
    throw SolverError("lippmann_schwinger_solve: GMRES did not converge, residual " +
                      std::to_string(res.relative_residual));
  }
  return {raster, k, theta, std::move(contrast), std::move(u), res.iterations, res.relative_residual};
}

}  // namespace dsm
