#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfg {

struct NumericError : std::runtime_error {
  double residual;
  int iterations;
  NumericError(const std::string& what, double res, int iters)
      : std::runtime_error(what + " (residual " + std::to_string(res) + " after " +
                           std::to_string(iters) + " iterations)"),
        residual(res),
        iterations(iters) {}
};

// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
// Newton steps safeguarded by the shrinking bracket.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double x0, double tol = 1e-13,
                     int max_iter = 100) {
  double x = std::min(std::max(x0, lo), hi);
  double fx = f(x);
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fx) <= tol) return x;
    if (fx > 0) hi = x;
    else lo = x;
    const double d = df(x);
    double xn = (d > 0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) return x;
    x = xn;
    fx = f(x);
  }
  if (std::fabs(fx) <= tol * 1e3 || hi - lo <= tol * (1.0 + std::fabs(x))) return x;
  throw NumericError("newton_bisect did not converge", fx, max_iter);
}

// Bisection for an increasing function, bracket given.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-14, int max_iter = 200) {
  double flo = f(lo);
  if (flo >= 0) return lo;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= xtol * (1.0 + std::fabs(mid))) return mid;
    if (f(mid) >= 0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Maximum of a concave function on [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 200) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && b - a > xtol * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace mfg
