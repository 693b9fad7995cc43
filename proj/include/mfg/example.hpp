#pragma once

#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

// Closed forms for the benchmark instance on the 1-torus:
// H(x,p) = |p|^2/2 + W(x) with a triangle-wave potential W, f(m) = m.
// The ergodic system has lambda = 0, density max{W,0}, and a one-parameter
// family u_theta, theta in [1/8,3/8], of value functions; the vanishing
// discount limit selects theta = 1/4.
namespace mfg::example {

inline constexpr double kThetaMin = 0.125;
inline constexpr double kThetaMax = 0.375;
inline constexpr double kThetaSelected = 0.25;

double potential(double x);  // W, periodic
double density(double x);    // max{W,0}
double ergodic_lambda();     // 0

// u_theta with the normalization u_theta(0) = 0, plus the constant C.
double u_theta(double theta, double x, double C = 0.0);
// a.e. derivative of u_theta; vanishes on {m > 0}.
double u_theta_derivative(double theta, double x);

// Companion family with the gradient sign flipped; weak solutions that
// fail the supersolution property. Negative-test material only.
double v_theta(double theta, double x, double C = 0.0);
double v_theta_derivative(double theta, double x);

// int_0^{1/2} <u_theta> m dx and its closed-form theta-derivative.
double selection_value(double theta);
double selection_derivative(double theta);

// u_{1/4} sampled at cell centers, discrete mean removed.
Field selected_limit(const TorusGrid& grid);

// Cell samples of an arbitrary scalar x -> s(x) (d=1 grids).
Field sample_cells(const TorusGrid& grid, double (*fn)(double));

ProblemSpec make_spec();       // the instance above
ProblemSpec make_flat_spec();  // V = 0 (constant solution u = 1/eps, m = 1)

}  // namespace mfg::example
