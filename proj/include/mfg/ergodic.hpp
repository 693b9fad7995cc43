#pragma once

#include <vector>

#include "mfg/dual_solver.hpp"
#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct SweepRow {
  double epsilon = 0.0;
  double lambda_estimate = 0.0;  // -eps * integral of u^eps
  double gap = 0.0;
  long iterations = 0;
  double du_sup = 0.0;  // ||<u^eps> - <u^prev>||_inf (0 for the first row)
  double dm_l1 = 0.0;   // ||m^eps - m^prev||_L1
};

struct ErgodicSolution {
  Field u;  // mean-zero representative of the limit
  Field m;
  double lambda = 0.0;
  std::vector<SweepRow> sweep;
};

struct SweepError : std::runtime_error {
  std::vector<SweepRow> partial;
  SweepError(const std::string& what, std::vector<SweepRow> rows)
      : std::runtime_error(what), partial(std::move(rows)) {}
};

// Sufficient condition of the stability theorem: q >= d or r' <= qd/(d-q).
bool stability_condition_holds(const ProblemSpec& spec);

// Solves (DP) along the strictly decreasing eps schedule with warm starts;
// lambda = -(last eps * int u^eps), u = last mean-zero u^eps, m = last m^eps.
// Warns (stderr) when the stability condition fails. Throws SweepError with
// the completed rows if an inner solve does not converge.
ErgodicSolution vanishing_discount_sweep(const ProblemSpec& spec, const TorusGrid& grid,
                                         const std::vector<double>& eps_schedule,
                                         const SolverParams& params = {});

// A(phi, lambda) = h^d sum [ F*(x, -lambda + H(x, Dphi)) + lambda ].
double evaluate_A_ergodic(const ProblemSpec& spec, const Field& phi, double lambda);

// integrate(mean_zero(u) * m); m should have unit mass.
double selection_functional(const Field& u, const Field& m);

struct ConstantSolution {
  Field m;
  double lambda = 0.0;
};

// lambda by monotone bisection so that m = max{f^-1(x, H(x,0)-lambda), 0}
// has unit mass (to 1e-10); the constant-u ergodic solution family.
ConstantSolution constant_solution_density(const ProblemSpec& spec, const TorusGrid& grid);

}  // namespace mfg
