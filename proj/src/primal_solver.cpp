#include "mfg/primal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mfg/parallel.hpp"
#include "mfg/poisson.hpp"

namespace mfg {

namespace {

// s_c = eps*phi_c + H(x_c, b_c) with b the forward differences at cell c.
Field discount_slope(const ProblemSpec& spec, const Field& phi, double eps) {
  const TorusGrid& grid = phi.grid;
  const int d = grid.dim;
  Field g = discrete_gradient(phi);
  Field s = Field::cell_scalar(grid);
  par_for(grid.cells(), [&](std::ptrdiff_t c) {
    Vec b{0.0, 0.0};
    for (int a = 0; a < d; ++a) b[a] = g.at_face(a, c);
    s[c] = eps * phi[c] + spec.H(grid.cell_center(c), b);
  });
  return s;
}

}  // namespace

double evaluate_A(const ProblemSpec& spec, const Field& phi, double eps) {
  if (phi.kind != FieldKind::CellScalar)
    throw std::invalid_argument("evaluate_A: phi must be a cell scalar");
  const TorusGrid& grid = phi.grid;
  const Field s = discount_slope(spec, phi, eps);
  double total = 0.0;
  for (std::ptrdiff_t c = 0; c < grid.cells(); ++c)
    total += coupling_conjugate(spec, grid.cell_center(c), s[c]) - eps * phi[c];
  return total * grid.cell_volume();
}

Field gradient_A(const ProblemSpec& spec, const Field& phi, double eps) {
  const TorusGrid& grid = phi.grid;
  const int d = grid.dim;
  const Field g = discrete_gradient(phi);
  const Field s = discount_slope(spec, phi, eps);
  // v_{a,c} = m_c * DpH_a(x_c, b_c); chain rule gives
  // grad_j = eps*(m_j - 1) - div(v)_j, the K_eps violation of (m, -v).
  Field m = Field::cell_scalar(grid);
  Field v = Field::face_vector(grid);
  par_for(grid.cells(), [&](std::ptrdiff_t c) {
    const Point x = grid.cell_center(c);
    Vec b{0.0, 0.0};
    for (int a = 0; a < d; ++a) b[a] = g.at_face(a, c);
    m[c] = coupling_conjugate_prime(spec, x, s[c]);
    const Vec dph = spec.DpH(x, b);
    for (int a = 0; a < d; ++a) v.at_face(a, c) = m[c] * dph[a];
  });
  Field out = discrete_divergence(v);
  par_for(grid.cells(), [&](std::ptrdiff_t c) { out[c] = eps * (m[c] - 1.0) - out[c]; });
  return out;
}

PrimalIterate solve_primal(const ProblemSpec& spec, const TorusGrid& grid, double eps,
                           const SolverParams& params, const Field* warm_start) {
  if (!(eps > 0.0)) throw std::invalid_argument("solve_primal: eps must be > 0");
  if (spec.dimension != grid.dim) throw std::invalid_argument("solve_primal: dimension mismatch");

  // Descent preconditioned by (eps^2 I - Lap)^-1, the Gram operator of
  // phi -> (eps*phi, grad phi); the raw gradient stiffens like n^2.
  PeriodicHelmholtz helm(grid);
  const double alpha = eps * eps;

  Field phi = warm_start ? *warm_start : Field::cell_scalar(grid);
  double A = evaluate_A(spec, phi, eps);
  Field gr = gradient_A(spec, phi, eps);
  Field dir = helm.solve(alpha, gr);
  double gn = l2_norm(gr);
  double gd = inner(gr, dir);  // squared gradient norm in the solve metric

  PrimalIterate best{phi, A, gn};
  Field phi_old = phi, dir_old = dir;
  std::deque<double> recent{A};  // nonmonotone line-search reference window
  double step = 1.0;

  for (long it = 0; it < params.max_iter && gn > params.tol_primal; ++it) {
    if (it > 0) {
      // Barzilai-Borwein step from the preconditioned displacement pair.
      Field sdiff = phi - phi_old, ydiff = dir - dir_old;
      const double sy = inner(sdiff, ydiff);
      if (sy > 0.0) step = std::clamp(inner(sdiff, sdiff) / sy, 1e-12, 1e8);
    }
    const double ref = *std::max_element(recent.begin(), recent.end());
    phi_old = phi;
    dir_old = dir;
    double t = step;
    Field trial;
    double A_trial = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = phi_old;
      par_for(trial.size(), [&](std::ptrdiff_t i) { trial[i] -= t * dir_old[i]; });
      A_trial = evaluate_A(spec, trial, eps);
      if (A_trial <= ref - 1e-4 * t * gd) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // step collapsed: at numerical stationarity
    phi = trial;
    A = A_trial;
    gr = gradient_A(spec, phi, eps);
    dir = helm.solve(alpha, gr);
    gn = l2_norm(gr);
    gd = inner(gr, dir);
    recent.push_back(A);
    if (recent.size() > 10) recent.pop_front();
    if (A < best.objective_A) best = {phi, A, gn};
  }
  if (A <= best.objective_A) best = {phi, A, gn};
  return best;
}

}  // namespace mfg
