#pragma once

#include <string>

#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct ResidualReport {
  double eq_residual_on_support = 0.0;  // sup over {m > threshold}
  double subsol_violation = 0.0;        // sup over all cells, positive part
  double fp_residual = 0.0;             // L2 of eps*m + div w - eps (or div w)
  double mass_error = 0.0;              // |integrate(m) - 1|
  double supersol_violation = 0.0;      // discrete proxy, see below
  double h1_norm_m = 0.0;
  std::string to_json() const;
};

enum class SolutionMode { Discount, Ergodic };

// Residuals of the weak-solution clauses. `value` is eps (Discount) or
// lambda (Ergodic). Du is evaluated per axis at the backward quotient, the
// forward quotient, and their midpoint; the equality/subsolution clauses
// take the most favorable combination, matching "a.e." statements for
// piecewise-smooth candidates. Cells with m > threshold_factor * max(m)
// count as support.
ResidualReport weak_solution_residuals(const ProblemSpec& spec, const Field& u, const Field& m,
                                       const Field& w, SolutionMode mode, double value,
                                       double threshold_factor = 1e-6);

// Mask (0/1 cell field) of Z = {H(x,0) - lambda - f(x,0) >= -tol_geom}
// union one-cell dilation of {m > threshold_factor * max(m)}.
Field uniqueness_set(const ProblemSpec& spec, const Field& m, double lambda,
                     double tol_geom = 1e-9, double threshold_factor = 1e-6);

// Discrete supersolution PROXY (not a viscosity check): per cell, H is
// evaluated at the one-sided quotients and their midpoint. Where the
// quotients open upward (p- < p+ componentwise: a convex kink, where the
// subdifferential is nonempty) every candidate must clear rhs, so the min
// is used; elsewhere the max. Returns sup of (rhs - H)_+ over cells.
double supersolution_proxy(const ProblemSpec& spec, const Field& u, const Field& rhs);

}  // namespace mfg
