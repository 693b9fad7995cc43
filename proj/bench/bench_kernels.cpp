// Timing comparison between the serial reference kernels and the
// OpenMP-parallel ones, plus the cellwise prox sweep from the dual solver.
#include <chrono>
#include <cstdio>
#include <random>

#include "mfg/grid.hpp"
#include "mfg/parallel.hpp"
#include "mfg/problem.hpp"
#include "mfg/ref_kernels.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(int reps, F&& body) {
  body();  // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) body();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count() / reps;
}

}  // namespace

int main() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  for (const mfg::TorusGrid grid : {mfg::TorusGrid(1, 1 << 20), mfg::TorusGrid(2, 1024)}) {
    mfg::Field phi = mfg::Field::cell_scalar(grid);
    mfg::Field w = mfg::Field::face_vector(grid);
    for (std::ptrdiff_t i = 0; i < phi.size(); ++i) phi[i] = uni(gen);
    for (std::ptrdiff_t i = 0; i < w.size(); ++i) w[i] = uni(gen);

    const int reps = 20;
    const double g_par = time_ms(reps, [&] { mfg::discrete_gradient(phi); });
    const double g_ref = time_ms(reps, [&] { mfg::ref::gradient(phi); });
    const double d_par = time_ms(reps, [&] { mfg::discrete_divergence(w); });
    const double d_ref = time_ms(reps, [&] { mfg::ref::divergence(w); });

    const double err_g = mfg::linf_norm(mfg::discrete_gradient(phi) - mfg::ref::gradient(phi));
    const double err_d =
        mfg::linf_norm(mfg::discrete_divergence(w) - mfg::ref::divergence(w));

    // The dual solver's hot loop: the perspective-style prox at every cell.
    mfg::HamiltonianSpec ham;
    mfg::CouplingSpec cpl;
    const mfg::ProblemSpec spec(std::move(ham), std::move(cpl), grid.dim);
    mfg::Field m = mfg::Field::cell_scalar(grid, 1.0);
    auto prox_serial = [&] {
      for (std::ptrdiff_t c = 0; c < grid.cells(); ++c) {
        const auto p = mfg::perspective_prox(spec, grid.cell_center(c), 0.5, m[c],
                                             {w.at_face(0, c), 0.0});
        m[c] = 0.5 * (m[c] + p.m) + 0.5;
      }
    };
    auto prox_parallel = [&] {
      mfg::par_for(grid.cells(), [&](std::ptrdiff_t c) {
        const auto p = mfg::perspective_prox(spec, grid.cell_center(c), 0.5, m[c],
                                             {w.at_face(0, c), 0.0});
        m[c] = 0.5 * (m[c] + p.m) + 0.5;
      });
    };
    const double p_ser = time_ms(5, prox_serial);
    const double p_par = time_ms(5, prox_parallel);

    std::printf("grid d=%d n=%d (%td cells)\n", grid.dim, grid.n, grid.cells());
    std::printf("  gradient    parallel %8.3f ms   serial %8.3f ms   speedup %5.2fx   |diff| %g\n",
                g_par, g_ref, g_ref / g_par, err_g);
    std::printf("  divergence  parallel %8.3f ms   serial %8.3f ms   speedup %5.2fx   |diff| %g\n",
                d_par, d_ref, d_ref / d_par, err_d);
    std::printf("  prox sweep  parallel %8.3f ms   serial %8.3f ms   speedup %5.2fx\n", p_par,
                p_ser, p_ser / p_par);
  }
  return 0;
}
