#include "mfg/verification.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace mfg {

namespace {

// Per-axis gradient candidates at cell c: backward, forward, midpoint.
void axis_candidates(const Field& u, std::ptrdiff_t c, int axis, double cand[3]) {
  const TorusGrid& g = u.grid;
  const double inv_h = double(g.n);
  const double pm = (u[c] - u[g.shift(c, axis, -1)]) * inv_h;
  const double pp = (u[g.shift(c, axis, 1)] - u[c]) * inv_h;
  cand[0] = pm;
  cand[1] = pp;
  cand[2] = 0.5 * (pm + pp);
}

template <class Fn>
void for_each_combo(const ProblemSpec& spec, const Field& u, std::ptrdiff_t c, Fn&& fn) {
  const int d = u.grid.dim;
  double cand[2][3];
  for (int a = 0; a < d; ++a) axis_candidates(u, c, a, cand[a]);
  const int n1 = d == 2 ? 3 : 1;
  const Point x = u.grid.cell_center(c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < n1; ++j) {
      Vec p{cand[0][i], d == 2 ? cand[1][j] : 0.0};
      fn(spec.H(x, p), i, j);
    }
}

}  // namespace

std::string ResidualReport::to_json() const {
  nlohmann::json j{{"eq_residual_on_support", eq_residual_on_support},
                   {"subsol_violation", subsol_violation},
                   {"fp_residual", fp_residual},
                   {"mass_error", mass_error},
                   {"supersol_violation", supersol_violation},
                   {"h1_norm_m", h1_norm_m}};
  return j.dump(2);
}

ResidualReport weak_solution_residuals(const ProblemSpec& spec, const Field& u, const Field& m,
                                       const Field& w, SolutionMode mode, double value,
                                       double threshold_factor) {
  require_same(u, m);
  if (w.kind != FieldKind::FaceVector || !(w.grid == u.grid))
    throw std::invalid_argument("weak_solution_residuals: w must be a face vector on u's grid");
  const TorusGrid& grid = u.grid;
  const std::ptrdiff_t N = grid.cells();
  const double eps = mode == SolutionMode::Discount ? value : 0.0;
  const double lambda = mode == SolutionMode::Ergodic ? value : 0.0;

  double mmax = 0.0;
  for (std::ptrdiff_t c = 0; c < N; ++c) mmax = std::max(mmax, m[c]);
  const double thresh = threshold_factor * mmax;

  ResidualReport rep;
  Field rhs_super = Field::cell_scalar(grid);
  for (std::ptrdiff_t c = 0; c < N; ++c) {
    const Point x = grid.cell_center(c);
    const double target = spec.f(x, m[c]) + lambda - eps * u[c];
    double best_eq = 1e300, best_pos = 1e300;
    for_each_combo(spec, u, c, [&](double H, int, int) {
      const double res = H - target;
      best_eq = std::min(best_eq, std::fabs(res));
      best_pos = std::min(best_pos, std::max(res, 0.0));
    });
    if (m[c] > thresh) rep.eq_residual_on_support = std::max(rep.eq_residual_on_support, best_eq);
    rep.subsol_violation = std::max(rep.subsol_violation, best_pos);
    rhs_super[c] = spec.f(x, 0.0) + lambda - eps * u[c];
  }

  Field fp = discrete_divergence(w);
  if (mode == SolutionMode::Discount)
    for (std::ptrdiff_t c = 0; c < N; ++c) fp[c] += eps * (m[c] - 1.0);
  rep.fp_residual = l2_norm(fp);
  rep.mass_error = std::fabs(integrate(m) - 1.0);
  rep.supersol_violation = supersolution_proxy(spec, u, rhs_super);
  rep.h1_norm_m = sobolev_h1_norm(m);
  return rep;
}

Field uniqueness_set(const ProblemSpec& spec, const Field& m, double lambda, double tol_geom,
                     double threshold_factor) {
  if (m.kind != FieldKind::CellScalar)
    throw std::invalid_argument("uniqueness_set: m must be a cell scalar");
  const TorusGrid& grid = m.grid;
  const std::ptrdiff_t N = grid.cells();
  double mmax = 0.0;
  for (std::ptrdiff_t c = 0; c < N; ++c) mmax = std::max(mmax, m[c]);
  const double thresh = threshold_factor * mmax;

  Field mask = Field::cell_scalar(grid);
  for (std::ptrdiff_t c = 0; c < N; ++c) {
    const Point x = grid.cell_center(c);
    if (spec.H(x, {0.0, 0.0}) - lambda - spec.f(x, 0.0) >= -tol_geom) {
      mask[c] = 1.0;
      continue;
    }
    // closure{m > 0}: superlevel set dilated by one cell per axis
    bool near = m[c] > thresh;
    for (int a = 0; a < grid.dim && !near; ++a)
      near = m[grid.shift(c, a, -1)] > thresh || m[grid.shift(c, a, 1)] > thresh;
    mask[c] = near ? 1.0 : 0.0;
  }
  return mask;
}

double supersolution_proxy(const ProblemSpec& spec, const Field& u, const Field& rhs) {
  require_same(u, rhs);
  const TorusGrid& grid = u.grid;
  const int d = grid.dim;
  double worst = 0.0;
  for (std::ptrdiff_t c = 0; c < grid.cells(); ++c) {
    double cand[2][3];
    bool convex_kink = true;
    for (int a = 0; a < d; ++a) {
      axis_candidates(u, c, a, cand[a]);
      convex_kink = convex_kink && cand[a][0] < cand[a][1];
    }
    const Point x = grid.cell_center(c);
    const int n1 = d == 2 ? 3 : 1;
    double agg = convex_kink ? 1e300 : -1e300;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < n1; ++j) {
        Vec p{cand[0][i], d == 2 ? cand[1][j] : 0.0};
        const double H = spec.H(x, p);
        agg = convex_kink ? std::min(agg, H) : std::max(agg, H);
      }
    worst = std::max(worst, rhs[c] - agg);
  }
  return std::max(worst, 0.0);
}

}  // namespace mfg
