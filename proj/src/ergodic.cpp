#include "mfg/ergodic.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mfg/parallel.hpp"
#include "mfg/rootfind.hpp"

namespace mfg {

bool stability_condition_holds(const ProblemSpec& spec) {
  const double d = spec.dimension, q = spec.q(), rp = spec.r_prime();
  if (q >= d) return true;
  return rp <= q * d / (d - q);
}

ErgodicSolution vanishing_discount_sweep(const ProblemSpec& spec, const TorusGrid& grid,
                                         const std::vector<double>& eps_schedule,
                                         const SolverParams& params) {
  if (eps_schedule.empty()) throw std::invalid_argument("sweep: empty schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0)) throw std::invalid_argument("sweep: eps must be positive");
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
      throw std::invalid_argument("sweep: schedule must be strictly decreasing");
  }
  if (!stability_condition_holds(spec))
    std::fprintf(stderr,
                 "warning: stability condition (q >= d or r' <= qd/(d-q)) fails; "
                 "the vanishing-discount limit is not guaranteed\n");

  ErgodicSolution out;
  DiscountSolution sol;
  Field prev_mean_u, prev_m;
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    const double eps = eps_schedule[k];
    try {
      sol = solve_dual(spec, grid, eps, params, k == 0 ? nullptr : &sol);
    } catch (const ConvergenceError& e) {
      throw SweepError(std::string("sweep: solve failed at eps = ") + std::to_string(eps) + ": " +
                           e.what(),
                       std::move(out.sweep));
    }
    SweepRow row;
    row.epsilon = eps;
    row.lambda_estimate = -eps * integrate(sol.u);
    row.gap = sol.diagnostics.final_gap;
    row.iterations = sol.diagnostics.iterations;
    Field mean_u = mean_zero(sol.u);
    if (k > 0) {
      row.du_sup = linf_norm(mean_u - prev_mean_u);
      row.dm_l1 = l1_norm(sol.m - prev_m);
    }
    out.sweep.push_back(row);
    prev_mean_u = std::move(mean_u);
    prev_m = sol.m;
  }
  out.lambda = out.sweep.back().lambda_estimate;
  out.u = mean_zero(sol.u);
  out.m = sol.m;
  return out;
}

double evaluate_A_ergodic(const ProblemSpec& spec, const Field& phi, double lambda) {
  if (phi.kind != FieldKind::CellScalar)
    throw std::invalid_argument("evaluate_A_ergodic: phi must be a cell scalar");
  const TorusGrid& grid = phi.grid;
  const int d = grid.dim;
  const Field g = discrete_gradient(phi);
  double total = 0.0;
  for (std::ptrdiff_t c = 0; c < grid.cells(); ++c) {
    const Point x = grid.cell_center(c);
    Vec b{0.0, 0.0};
    for (int a = 0; a < d; ++a) b[a] = g.at_face(a, c);
    total += coupling_conjugate(spec, x, -lambda + spec.H(x, b)) + lambda;
  }
  return total * grid.cell_volume();
}

double selection_functional(const Field& u, const Field& m) {
  require_same(u, m);
  Field centered = mean_zero(u);
  for (std::ptrdiff_t c = 0; c < centered.size(); ++c) centered[c] *= m[c];
  return integrate(centered);
}

ConstantSolution constant_solution_density(const ProblemSpec& spec, const TorusGrid& grid) {
  if (spec.dimension != grid.dim)
    throw std::invalid_argument("constant_solution_density: dimension mismatch");
  const std::ptrdiff_t N = grid.cells();
  std::vector<double> H0(N);
  for (std::ptrdiff_t c = 0; c < N; ++c) H0[c] = spec.H(grid.cell_center(c), {0.0, 0.0});

  // mass(lambda) = int max{f^-1(x, H(x,0)-lambda), 0} is nonincreasing in
  // lambda; bisect on -lambda so the wrapped function is increasing.
  auto mass = [&](double lambda) {
    double s = 0.0;
    for (std::ptrdiff_t c = 0; c < N; ++c)
      s += spec.f_inverse(grid.cell_center(c), H0[c] - lambda);
    return s * grid.cell_volume();
  };
  double lo = -1.0, hi = 1.0;
  int guard = 0;
  while (mass(lo) < 1.0) {
    lo *= 2.0;
    if (++guard > 120) throw NumericError("constant_solution_density: no lower bracket", mass(lo), guard);
  }
  guard = 0;
  while (mass(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 120) throw NumericError("constant_solution_density: no upper bracket", mass(hi), guard);
  }
  double a = lo, b = hi;  // mass(a) >= 1 >= mass(b)
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::fabs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    (mass(mid) >= 1.0 ? a : b) = mid;
  }
  double lambda = 0.5 * (a + b);
  if (std::fabs(mass(lambda) - 1.0) > 1e-10)
    throw NumericError("constant_solution_density: mass not matched", mass(lambda) - 1.0, 200);

  ConstantSolution out;
  out.lambda = lambda;
  out.m = Field::cell_scalar(grid);
  for (std::ptrdiff_t c = 0; c < N; ++c)
    out.m[c] = spec.f_inverse(grid.cell_center(c), H0[c] - lambda);
  return out;
}

}  // namespace mfg
