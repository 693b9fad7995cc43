#pragma once

#include <vector>

#include "mfg/grid.hpp"

struct fftw_plan_s;

namespace mfg {

// Direct solver for (alpha*I - Lap_h) x = rhs on cell scalars, where Lap_h
// is the periodic 3-point (5-point in 2-D) Laplacian matching the
// forward-gradient / backward-divergence pair. FFT-diagonalized, any n.
// One instance owns its FFTW buffers: not safe for concurrent solve calls;
// use one instance per solver.
class PeriodicHelmholtz {
 public:
  explicit PeriodicHelmholtz(const TorusGrid& grid);
  ~PeriodicHelmholtz();
  PeriodicHelmholtz(const PeriodicHelmholtz&) = delete;
  PeriodicHelmholtz& operator=(const PeriodicHelmholtz&) = delete;

  // alpha > 0 required (alpha = 0 leaves the mean undetermined).
  Field solve(double alpha, const Field& rhs) const;

 private:
  TorusGrid grid_;
  fftw_plan_s* fwd_ = nullptr;
  fftw_plan_s* bwd_ = nullptr;
  double* real_ = nullptr;
  void* spec_ = nullptr;  // fftw_complex*
  std::vector<double> eig_;  // -Lap_h eigenvalue per retained mode
};

}  // namespace mfg
