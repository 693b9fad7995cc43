#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct SolverParams {
  double rho = 1.0;          // augmented-Lagrangian penalty (initial value)
  bool adaptive_rho = true;  // residual balancing with multiplier rescale
  double tol_primal = 1e-8;
  double tol_dual = 1e-8;
  double tol_gap = 1e-6;  // relative: |A + B| <= tol_gap * (1 + |B|)
  long max_iter = 400000;
  int check_interval = 10;  // residual/gap evaluation cadence
  unsigned long seed = 0;
  double perturbation = 0.0;  // amplitude of random noise on the initial u
};

struct SolverDiagnostics {
  long iterations = 0;
  bool converged = false;
  double wall_time_seconds = 0.0;
  double final_primal_residual = 0.0;
  double final_dual_residual = 0.0;
  double final_gap = 0.0;
  // Sampled every check_interval iterations.
  std::vector<double> primal_residual_history;
  std::vector<double> dual_residual_history;
  std::vector<double> gap_history;
  std::vector<double> objective_history;  // B(m_k, w_k)
};

struct DiscountSolution {
  double epsilon = 0.0;
  Field u;  // value function (constraint multiplier)
  Field m;  // density, >= 0
  Field w;  // flux, w = -m DpH(x, Du)
  double objective_B = 0.0;
  SolverDiagnostics diagnostics;
};

struct ConvergenceError : std::runtime_error {
  SolverDiagnostics diagnostics;
  ConvergenceError(const std::string& what, SolverDiagnostics diag)
      : std::runtime_error(what), diagnostics(std::move(diag)) {}
};

// B(m,w) = h^d sum_cells [ m H*(x, -w/m) + F(x,m) ], with the flux read at
// each cell's forward faces (the convention paired with discrete_gradient).
// nullopt encodes +infinity: some cell has m = 0 but w != 0.
// Throws std::domain_error if m has a negative entry.
std::optional<double> evaluate_B(const ProblemSpec& spec, const Field& m, const Field& w);

// Minimizes B over K_eps = { eps*m + div w = eps, m >= 0 } by ADMM on the
// equivalent primal functional A^eps; u is recovered as the multiplier.
// Power-form specs only. Throws ConvergenceError (diagnostics attached) on
// iteration cap, std::invalid_argument on bad inputs.
DiscountSolution solve_dual(const ProblemSpec& spec, const TorusGrid& grid, double eps,
                            const SolverParams& params = {},
                            const DiscountSolution* warm_start = nullptr);

}  // namespace mfg
