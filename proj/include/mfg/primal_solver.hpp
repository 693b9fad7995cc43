#pragma once

#include "mfg/dual_solver.hpp"
#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct PrimalIterate {
  Field phi;
  double objective_A = 0.0;
  double gradient_norm = 0.0;
};

// A^eps(phi) = h^d sum_cells [ F*(x, eps*phi + H(x, Dphi)) - eps*phi ],
// Dphi the forward-difference gradient read at each cell's forward faces.
double evaluate_A(const ProblemSpec& spec, const Field& phi, double eps);

// Gradient of the functional above with respect to the cell values of phi,
// scaled so that inner(grad, delta) is the directional derivative.
Field gradient_A(const ProblemSpec& spec, const Field& phi, double eps);

// Minimizes A^eps by Barzilai-Borwein descent with nonmonotone backtracking.
// Independent of solve_dual; used for the duality-gap certificate. Throws
// ConvergenceError with the best iterate's diagnostics on iteration cap.
PrimalIterate solve_primal(const ProblemSpec& spec, const TorusGrid& grid, double eps,
                           const SolverParams& params = {}, const Field* warm_start = nullptr);

}  // namespace mfg
