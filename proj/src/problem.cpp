#include "mfg/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "mfg/quadrature.hpp"
#include "mfg/rootfind.hpp"

namespace mfg {

namespace {

// Probe sample covering the torus; used for the f(x,0) normalization and
// monotonicity checks at construction time.
std::vector<Point> probe_points(int dim) {
  std::vector<Point> pts;
  if (dim == 1) {
    for (int i = 0; i < 512; ++i) pts.push_back({(i + 0.5) / 512.0, 0.0});
  } else {
    for (int j = 0; j < 48; ++j)
      for (int i = 0; i < 48; ++i) pts.push_back({(i + 0.5) / 48.0, (j + 0.5) / 48.0});
  }
  return pts;
}

double pow_pos(double t, double e) { return t > 0.0 ? std::pow(t, e) : 0.0; }

}  // namespace

ProblemSpec::ProblemSpec(HamiltonianSpec ham, CouplingSpec cpl, int dim)
    : hamiltonian(std::move(ham)), coupling(std::move(cpl)), dimension(dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("ProblemSpec: dimension must be 1 or 2");
  if (!(hamiltonian.r > 1.0)) throw std::invalid_argument("ProblemSpec: need r > 1");
  if (!(coupling.q > 1.0)) throw std::invalid_argument("ProblemSpec: need q > 1");
  if (!hamiltonian.has_callback() && !(hamiltonian.kappa > 0.0))
    throw std::invalid_argument("ProblemSpec: need kappa > 0");
  if (!coupling.has_callback() && !(coupling.c_f > 0.0))
    throw std::invalid_argument("ProblemSpec: need c_f > 0");

  const auto pts = probe_points(dim);
  double max_f0 = -1e300;
  for (const Point& x : pts) {
    const double f0 = coupling.has_callback()
                          ? coupling.eval(x, 0.0)
                          : (coupling.g ? coupling.g(x) : 0.0);
    max_f0 = std::max(max_f0, f0);
  }
  normalization_shift = max_f0 > 0.0 ? max_f0 : 0.0;

  if (coupling.has_callback()) {
    const double ms[] = {0.0, 0.25, 0.5, 1.0, 2.0, 5.0};
    for (const Point& x : pts)
      for (int k = 1; k < 6; ++k)
        if (!(coupling.eval(x, ms[k]) > coupling.eval(x, ms[k - 1])))
          throw std::invalid_argument("ProblemSpec: coupling must be strictly increasing in m");
  }
}

double ProblemSpec::potential(const Point& x) const {
  const double v = hamiltonian.potential ? hamiltonian.potential(x) : 0.0;
  return v - normalization_shift;
}

double ProblemSpec::coupling_offset(const Point& x) const {
  const double g = coupling.g ? coupling.g(x) : 0.0;
  return g - normalization_shift;
}

double ProblemSpec::H(const Point& x, const Vec& p) const {
  if (hamiltonian.has_callback()) return hamiltonian.eval(x, p) - normalization_shift;
  return hamiltonian.kappa * std::pow(vec_norm(p, dimension), hamiltonian.r) + potential(x);
}

Vec ProblemSpec::DpH(const Point& x, const Vec& p) const {
  if (hamiltonian.has_callback()) return hamiltonian.grad(x, p);
  const double np = vec_norm(p, dimension);
  Vec out{0.0, 0.0};
  if (np == 0.0) return out;
  const double scale = hamiltonian.kappa * hamiltonian.r * std::pow(np, hamiltonian.r - 2.0);
  for (int a = 0; a < dimension; ++a) out[a] = scale * p[a];
  return out;
}

double ProblemSpec::f(const Point& x, double m) const {
  if (coupling.has_callback()) return coupling.eval(x, m) - normalization_shift;
  return coupling.c_f * pow_pos(m, coupling.q - 1.0) + coupling_offset(x);
}

double ProblemSpec::f_inverse(const Point& x, double a) const {
  if (!coupling.has_callback())
    return pow_pos((a - coupling_offset(x)) / coupling.c_f, 1.0 / (coupling.q - 1.0));
  if (a <= f(x, 0.0)) return 0.0;
  double hi = 1.0;
  int guard = 0;
  while (f(x, hi) < a) {
    hi *= 2.0;
    if (++guard > 200) throw NumericError("f_inverse: bracket expansion failed", f(x, hi) - a, guard);
  }
  return bisect([&](double m) { return f(x, m) - a; }, 0.0, hi);
}

double coupling_primitive(const ProblemSpec& spec, const Point& x, double m) {
  if (m < 0.0) throw std::domain_error("coupling_primitive: m must be >= 0");
  if (!spec.coupling.has_callback()) {
    const double q = spec.q();
    return spec.coupling.c_f / q * std::pow(m, q) + spec.coupling_offset(x) * m;
  }
  if (m == 0.0) return 0.0;
  return gauss_legendre([&](double s) { return spec.f(x, s); }, 0.0, m, 48);
}

double coupling_conjugate(const ProblemSpec& spec, const Point& x, double a) {
  if (!spec.coupling.has_callback()) {
    const double p = spec.p();
    const double t = a - spec.coupling_offset(x);
    if (t <= 0.0) return 0.0;
    return std::pow(spec.coupling.c_f, 1.0 - p) / p * std::pow(t, p);
  }
  const double mstar = coupling_conjugate_prime(spec, x, a);
  if (mstar == 0.0) return 0.0;
  return a * mstar - coupling_primitive(spec, x, mstar);
}

double coupling_conjugate_prime(const ProblemSpec& spec, const Point& x, double a) {
  return spec.f_inverse(x, a);
}

double hamiltonian_conjugate(const ProblemSpec& spec, const Point& x, const Vec& v) {
  if (!spec.hamiltonian.has_callback()) {
    const double rp = spec.r_prime();
    const double coef = (1.0 / rp) * std::pow(spec.hamiltonian.kappa * spec.r(), 1.0 - rp);
    return coef * std::pow(vec_norm(v, spec.dimension), rp) - spec.potential(x);
  }
  // Callback Hamiltonian: maximize v.p - H(x,p) by golden section per axis.
  const int d = spec.dimension;
  Vec p{0.0, 0.0};
  double radius = 1.0;
  auto obj = [&](const Vec& pp) { return v[0] * pp[0] + v[1] * pp[1] - spec.H(x, pp); };
  // Expand the search radius until the concave objective decays at every
  // boundary point of the box, so the maximum is interior.
  for (int guard = 0; guard < 200; ++guard) {
    bool interior = true;
    for (int axis = 0; axis < d; ++axis) {
      Vec lo{0.0, 0.0}, hi{0.0, 0.0};
      lo[axis] = -radius;
      hi[axis] = radius;
      interior = interior && obj(lo) < obj(p) && obj(hi) < obj(p);
    }
    if (interior) break;
    radius *= 2.0;
    if (guard == 199) throw NumericError("hamiltonian_conjugate: no interior maximum found", radius, guard);
  }
  for (int sweep = 0; sweep < (d == 1 ? 1 : 6); ++sweep)
    for (int axis = 0; axis < d; ++axis) {
      Vec trial = p;
      p[axis] = golden_max(
          [&](double t) {
            trial[axis] = t;
            return obj(trial);
          },
          -radius, radius);
      trial[axis] = p[axis];
    }
  return obj(p);
}

std::optional<double> perspective_value(const ProblemSpec& spec, const Point& x, double m,
                                        const Vec& w) {
  if (m < 0.0) throw std::domain_error("perspective_value: m must be >= 0");
  if (m == 0.0) {
    if (vec_norm(w, spec.dimension) == 0.0) return 0.0;
    return std::nullopt;
  }
  Vec v{0.0, 0.0};
  for (int a = 0; a < spec.dimension; ++a) v[a] = -w[a] / m;
  return m * hamiltonian_conjugate(spec, x, v);
}

ProxPoint perspective_prox(const ProblemSpec& spec, const Point& x, double step, double mt,
                           const Vec& wt) {
  if (!(step > 0.0)) throw std::invalid_argument("perspective_prox: step must be > 0");
  if (spec.hamiltonian.has_callback())
    throw std::invalid_argument("perspective_prox: power-form Hamiltonian required");
  const int d = spec.dimension;
  const double rp = spec.r_prime();
  const double kp = (1.0 / rp) * std::pow(spec.hamiltonian.kappa * spec.r(), 1.0 - rp);
  const double V = spec.potential(x);
  const double wn = vec_norm(wt, d);

  // Scaled flux magnitude beta(m) >= 0 solves m*beta + step*kp*rp*beta^(rp-1) = |wt|.
  auto beta_of_m = [&](double m) {
    if (wn == 0.0) return 0.0;
    if (rp == 2.0) return wn / (m + 2.0 * step * kp);
    double lo = 0.0, hi = wn / std::max(m, 1e-300);
    if (m == 0.0) hi = std::pow(wn / (step * kp * rp), 1.0 / (rp - 1.0)) + 1.0;
    return newton_bisect(
        [&](double b) { return m * b + step * kp * rp * std::pow(b, rp - 1.0) - wn; },
        [&](double b) { return m + step * kp * rp * (rp - 1.0) * std::pow(b, rp - 2.0); }, lo, hi,
        0.5 * hi, 1e-14 * (1.0 + wn));
  };
  // Stationarity in m: m = mt + step*(V + kp*(rp-1)*beta^rp).
  auto psi = [&](double m) {
    const double b = beta_of_m(m);
    return m - mt - step * (V + kp * (rp - 1.0) * std::pow(b, rp));
  };
  const double b0 = beta_of_m(0.0);
  double hi = mt + step * (std::fabs(V) + kp * (rp - 1.0) * std::pow(b0, rp)) + 1.0;
  ProxPoint out{0.0, {0.0, 0.0}};
  if (psi(0.0) >= 0.0) return out;  // constrained optimum sits on m = 0, w = 0
  out.m = bisect(psi, 0.0, hi, 1e-14);
  const double beta = beta_of_m(out.m);
  if (wn > 0.0)
    for (int a = 0; a < d; ++a) out.w[a] = out.m * beta * wt[a] / wn;
  return out;
}

double coupling_conjugate_prox(const ProblemSpec& spec, const Point& x, double step, double at) {
  if (!(step > 0.0)) throw std::invalid_argument("coupling_conjugate_prox: step must be > 0");
  // Optimality: a + step * (F*)'(a) = at, with (F*)' nondecreasing.
  const double g0 = spec.f(x, 0.0);
  if (at <= g0) return at;  // flat region of F*
  auto res = [&](double a) { return a + step * coupling_conjugate_prime(spec, x, a) - at; };
  return bisect(res, g0, at, 1e-14);
}

GrowthConstants estimate_growth_constants(const ProblemSpec& spec) {
  const double p = spec.p(), rp = spec.r_prime();
  GrowthConstants gc{1.0, 1.0};
  const int dim = spec.dimension;
  auto fits_f = [&](double C) {
    for (int i = 0; i < 64; ++i) {
      Point x{(i + 0.5) / 64.0, dim == 2 ? (i * 7 % 64 + 0.5) / 64.0 : 0.0};
      for (double a : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
        const double fs = coupling_conjugate(spec, x, a);
        if (fs < std::pow(a, p) / C - C || fs > C * std::pow(a, p) + C) return false;
      }
    }
    return true;
  };
  auto fits_h = [&](double C) {
    for (int i = 0; i < 64; ++i) {
      Point x{(i + 0.5) / 64.0, dim == 2 ? (i * 7 % 64 + 0.5) / 64.0 : 0.0};
      for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
        const double hs = hamiltonian_conjugate(spec, x, {t, 0.0});
        if (hs < std::pow(t, rp) / C - C || hs > C * std::pow(t, rp) + C) return false;
      }
    }
    return true;
  };
  while (!fits_f(gc.C_fstar) && gc.C_fstar < 1e12) gc.C_fstar *= 2.0;
  while (!fits_h(gc.C_hstar) && gc.C_hstar < 1e12) gc.C_hstar *= 2.0;
  return gc;
}

}  // namespace mfg
