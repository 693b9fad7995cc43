#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "mfg/grid.hpp"

namespace mfg {

using Vec = std::array<double, 2>;

inline double vec_norm(const Vec& v, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += v[a] * v[a];
  return std::sqrt(s);
}

// H(x,p) = kappa*|p|^r + V(x), or a user-supplied convex H with gradient.
struct HamiltonianSpec {
  double kappa = 0.5;
  double r = 2.0;
  std::function<double(const Point&)> potential;  // V; empty means 0

  // Escape hatch: convex H(x,.) evaluator and p-gradient. When set, the
  // power-form fields above are ignored except for the growth exponent r.
  std::function<double(const Point&, const Vec&)> eval;
  std::function<Vec(const Point&, const Vec&)> grad;
  bool has_callback() const { return bool(eval); }
};

// f(x,m) = c_f*m^(q-1) + g(x), or a user callback strictly increasing in m.
struct CouplingSpec {
  double c_f = 1.0;
  double q = 2.0;
  std::function<double(const Point&)> g;  // empty means 0

  std::function<double(const Point&, double)> eval;
  bool has_callback() const { return bool(eval); }
};

// One MFG instance. The constructor normalizes so f(x,0) <= 0 by shifting
// both H and f by max_x f(x,0) when that maximum is positive.
struct ProblemSpec {
  HamiltonianSpec hamiltonian;
  CouplingSpec coupling;
  int dimension = 1;
  double normalization_shift = 0.0;  // subtracted from V and g

  ProblemSpec(HamiltonianSpec ham, CouplingSpec cpl, int dim);

  double r() const { return hamiltonian.r; }
  double q() const { return coupling.q; }
  double p() const { return coupling.q / (coupling.q - 1.0); }
  double r_prime() const { return hamiltonian.r / (hamiltonian.r - 1.0); }
  bool power_form() const {
    return !hamiltonian.has_callback() && !coupling.has_callback();
  }

  double potential(const Point& x) const;  // V(x), shift applied
  double coupling_offset(const Point& x) const;  // g(x) = f(x,0), shift applied

  double H(const Point& x, const Vec& p) const;
  Vec DpH(const Point& x, const Vec& p) const;
  double f(const Point& x, double m) const;
  // Inverse of f(x,.) on [0,inf); values below f(x,0) map to 0.
  double f_inverse(const Point& x, double a) const;
};

// F(x,m) = int_0^m f(x,s) ds; throws std::domain_error for m < 0.
double coupling_primitive(const ProblemSpec& spec, const Point& x, double m);

// F*(x,a) = sup_{m>=0} { a m - F(x,m) }; closed form for the power family,
// safeguarded 1-D maximization for callback couplings.
double coupling_conjugate(const ProblemSpec& spec, const Point& x, double a);
// dF*/da = argmax m >= 0; equals f_inverse clamped at 0.
double coupling_conjugate_prime(const ProblemSpec& spec, const Point& x, double a);

// H*(x,v) = sup_p { v.p - H(x,p) }.
double hamiltonian_conjugate(const ProblemSpec& spec, const Point& x, const Vec& v);

// m*H*(x,-w/m) with the convention 0 at (0,0) and +infinity (nullopt) when
// m = 0 but w != 0. Throws std::domain_error for m < 0.
std::optional<double> perspective_value(const ProblemSpec& spec, const Point& x, double m,
                                        const Vec& w);

struct ProxPoint {
  double m;
  Vec w;
};

// argmin over (m >= 0, w) of m*H*(x,-w/m) + (|m-mt|^2 + |w-wt|^2)/(2*step).
ProxPoint perspective_prox(const ProblemSpec& spec, const Point& x, double step, double mt,
                           const Vec& wt);

// prox_{step F*(x,.)}(at).
double coupling_conjugate_prox(const ProblemSpec& spec, const Point& x, double step, double at);

// Bundled evaluators per the problem, for passing around as one handle.
struct ConjugateTable {
  const ProblemSpec* spec;
  explicit ConjugateTable(const ProblemSpec& s) : spec(&s) {}
  double fstar(const Point& x, double a) const { return coupling_conjugate(*spec, x, a); }
  double hstar(const Point& x, const Vec& v) const { return hamiltonian_conjugate(*spec, x, v); }
  double fstar_prox(const Point& x, double step, double at) const {
    return coupling_conjugate_prox(*spec, x, step, at);
  }
  ProxPoint perspective_prox(const Point& x, double step, double mt, const Vec& wt) const {
    return mfg::perspective_prox(*spec, x, step, mt, wt);
  }
};

// Smallest C (by doubling from 1) for which the |.|^p growth sandwich of
// F* and H* holds on a probe sample. Diagnostic only.
struct GrowthConstants {
  double C_fstar;
  double C_hstar;
};
GrowthConstants estimate_growth_constants(const ProblemSpec& spec);

}  // namespace mfg
