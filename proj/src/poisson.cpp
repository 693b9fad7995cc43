#include "mfg/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace mfg {

namespace {
// FFTW plan creation is not thread-safe; execution on private buffers is.
std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

PeriodicHelmholtz::PeriodicHelmholtz(const TorusGrid& grid) : grid_(grid) {
  const int n = grid.n;
  const std::ptrdiff_t cells = grid.cells();
  const std::ptrdiff_t half = n / 2 + 1;
  const std::ptrdiff_t spec_count = grid.dim == 1 ? half : std::ptrdiff_t(n) * half;

  std::lock_guard<std::mutex> lock(plan_mutex());
  real_ = fftw_alloc_real(cells);
  fftw_complex* spec = fftw_alloc_complex(spec_count);
  spec_ = spec;
  if (grid.dim == 1) {
    fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n, spec, real_, FFTW_ESTIMATE);
  } else {
    // Row-major index in our fields is ix + n*iy; FFTW's "last dimension
    // varies fastest" makes that (n1 = iy slow, n0 = ix fast) -> pass (n, n)
    // with ix as the halved dimension.
    fwd_ = fftw_plan_dft_r2c_2d(n, n, real_, spec, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(n, n, spec, real_, FFTW_ESTIMATE);
  }

  // Symbol of -Lap_h per retained mode: sum over axes of (4/h^2) sin^2(pi k/n).
  const double s = 4.0 * double(n) * double(n);
  auto sym = [&](int k) {
    const double t = std::sin(M_PI * k / n);
    return s * t * t;
  };
  eig_.resize(spec_count);
  if (grid.dim == 1) {
    for (int k = 0; k < half; ++k) eig_[k] = sym(k);
  } else {
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < half; ++kx) eig_[std::ptrdiff_t(ky) * half + kx] = sym(kx) + sym(ky);
  }
}

PeriodicHelmholtz::~PeriodicHelmholtz() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
  if (real_) fftw_free(real_);
  if (spec_) fftw_free(static_cast<fftw_complex*>(spec_));
}

Field PeriodicHelmholtz::solve(double alpha, const Field& rhs) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("PeriodicHelmholtz: alpha must be > 0");
  if (rhs.kind != FieldKind::CellScalar || !(rhs.grid == grid_))
    throw std::invalid_argument("PeriodicHelmholtz: rhs grid/kind mismatch");
  const std::ptrdiff_t cells = grid_.cells();
  for (std::ptrdiff_t i = 0; i < cells; ++i) real_[i] = rhs[i];
  fftw_execute(fwd_);
  auto* spec = static_cast<fftw_complex*>(spec_);
  const double norm = 1.0 / double(cells);
  for (std::size_t k = 0; k < eig_.size(); ++k) {
    const double scale = norm / (alpha + eig_[k]);
    spec[k][0] *= scale;
    spec[k][1] *= scale;
  }
  fftw_execute(bwd_);
  Field out = Field::cell_scalar(grid_);
  for (std::ptrdiff_t i = 0; i < cells; ++i) out[i] = real_[i];
  return out;
}

}  // namespace mfg
