#include "mfg/example.hpp"

#include <cmath>
#include <stdexcept>

#include "mfg/quadrature.hpp"

namespace mfg::example {

namespace {

double wrap01(double x) {
  x -= std::floor(x);
  return x;
}

void check_theta(double theta) {
  if (!(theta >= kThetaMin && theta <= kThetaMax))
    throw std::domain_error("theta must lie in [1/8, 3/8]");
}

constexpr double kK = 16.0 / 3.0;  // prefactor of the (.)^{3/2} branches

double pow32(double s) { return s > 0.0 ? s * std::sqrt(s) : 0.0; }

// u_theta on [0, 1/2] with u(0) = 0.
double u_half(double theta, double x) {
  const double t18 = theta - 0.125;
  if (theta <= 0.25) {
    if (x <= 0.125) return 0.0;
    if (x <= theta) return kK * pow32(x - 0.125);
    if (x <= 0.25) return 2.0 * kK * pow32(t18) - kK * pow32(x - 0.125);
    const double base = 2.0 * kK * pow32(t18) - 2.0 * kK * pow32(0.125);
    if (x <= 0.375) return base + kK * pow32(0.375 - x);
    return base;
  }
  if (x <= 0.125) return 0.0;
  if (x <= 0.25) return kK * pow32(x - 0.125);
  if (x <= theta) return 2.0 * kK * pow32(0.125) - kK * pow32(0.375 - x);
  const double base = 2.0 * kK * pow32(0.125) - 2.0 * kK * pow32(0.375 - theta);
  if (x <= 0.375) return base + kK * pow32(0.375 - x);
  return base;
}

}  // namespace

double potential(double x) {
  x = wrap01(x);
  if (x <= 0.25) return -32.0 * x + 4.0;
  if (x <= 0.5) return 32.0 * x - 12.0;
  if (x <= 0.75) return -32.0 * x + 20.0;
  return 32.0 * x - 28.0;
}

double density(double x) { return std::max(potential(x), 0.0); }

double ergodic_lambda() { return 0.0; }

double u_theta(double theta, double x, double C) {
  check_theta(theta);
  x = wrap01(x);
  if (x > 0.5) x = 1.0 - x;  // u_theta is symmetric about x = 1/2
  return u_half(theta, x) + C;
}

double u_theta_derivative(double theta, double x) {
  check_theta(theta);
  x = wrap01(x);
  const double c = std::sqrt(2.0 * std::max(-potential(x), 0.0));
  if ((x > 0.125 && x < theta) || (x > 0.625 && x < 1.0 - theta)) return c;
  if ((x > theta && x < 0.375) || (x > 1.0 - theta && x < 0.875)) return -c;
  return 0.0;
}

double v_theta(double theta, double x, double C) { return -u_theta(theta, x) + C; }

double v_theta_derivative(double theta, double x) { return -u_theta_derivative(theta, x); }

double selection_value(double theta) {
  check_theta(theta);
  auto u = [&](double x) { return u_half(theta, x); };
  auto um = [&](double x) { return u_half(theta, x) * density(x); };
  // Panels split at the breakpoints; sqrt substitutions absorb the
  // half-integer powers at 1/8 and 3/8 so each panel is polynomial.
  double int_u = 0.0, int_um = 0.0;
  const double lo = std::min(theta, 0.25), hi = std::max(theta, 0.25);
  int_u += gauss_legendre_sqrt_left(u, 0.125, lo);
  if (hi > lo) {
    // singular endpoint of the middle panel: 1/8 when theta = 1/8 (left),
    // 3/8 when theta = 3/8 (right); the substitution is exact either way
    if (theta <= 0.25)
      int_u += gauss_legendre_sqrt_left(u, lo, hi);
    else
      int_u += gauss_legendre_sqrt_right(u, lo, hi);
  }
  int_u += gauss_legendre_sqrt_right(u, hi, 0.375);
  int_u += gauss_legendre(u, 0.375, 0.5);
  int_um += gauss_legendre(um, 0.375, 0.5);  // u = 0 on [0,1/8], m = 0 on (1/8,3/8)
  // The full-torus mean of u is 2*int_u by symmetry and int_0^{1/2} m = 1/2,
  // so int_0^{1/2} <u> m = int_um - int_u.
  return int_um - int_u;
}

double selection_derivative(double theta) {
  check_theta(theta);
  if (theta <= 0.25) return 16.0 * std::sqrt(theta - 0.125) * (theta - 0.25);
  return 16.0 * std::sqrt(0.375 - theta) * (theta - 0.25);
}

Field selected_limit(const TorusGrid& grid) {
  if (grid.dim != 1) throw std::invalid_argument("selected_limit: d = 1 only");
  Field u = Field::cell_scalar(grid);
  for (std::ptrdiff_t c = 0; c < grid.cells(); ++c)
    u[c] = u_theta(kThetaSelected, grid.cell_center(c)[0]);
  return mean_zero(u);
}

Field sample_cells(const TorusGrid& grid, double (*fn)(double)) {
  if (grid.dim != 1) throw std::invalid_argument("sample_cells: d = 1 only");
  Field f = Field::cell_scalar(grid);
  for (std::ptrdiff_t c = 0; c < grid.cells(); ++c) f[c] = fn(grid.cell_center(c)[0]);
  return f;
}

ProblemSpec make_spec() {
  HamiltonianSpec ham;
  ham.kappa = 0.5;
  ham.r = 2.0;
  ham.potential = [](const Point& x) { return potential(x[0]); };
  CouplingSpec cpl;
  cpl.c_f = 1.0;
  cpl.q = 2.0;
  return ProblemSpec(std::move(ham), std::move(cpl), 1);
}

ProblemSpec make_flat_spec() {
  HamiltonianSpec ham;
  ham.kappa = 0.5;
  ham.r = 2.0;
  CouplingSpec cpl;
  cpl.c_f = 1.0;
  cpl.q = 2.0;
  return ProblemSpec(std::move(ham), std::move(cpl), 1);
}

}  // namespace mfg::example
