#pragma once

#include <cmath>
#include <vector>

namespace mfg {

// Gauss-Legendre rule on [-1,1]; nodes by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussRule& get(int n);  // cached, thread-safe
};

template <class F>
double gauss_legendre(F&& f, double a, double b, int n = 32) {
  const GaussRule& rule = GaussRule::get(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

// For integrands with a half-integer power singularity at the left (right)
// endpoint: substitute x = a + t^2 (x = b - t^2), which makes powers of
// (x-a)^(k/2) polynomial in t, so the rule is exact up to its degree.
template <class F>
double gauss_legendre_sqrt_left(F&& f, double a, double b, int n = 32) {
  const double T = std::sqrt(b - a);
  return gauss_legendre([&](double t) { return 2.0 * t * f(a + t * t); }, 0.0, T, n);
}

template <class F>
double gauss_legendre_sqrt_right(F&& f, double a, double b, int n = 32) {
  const double T = std::sqrt(b - a);
  return gauss_legendre([&](double t) { return 2.0 * t * f(b - t * t); }, 0.0, T, n);
}

}  // namespace mfg
