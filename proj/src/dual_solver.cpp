#include "mfg/dual_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "mfg/parallel.hpp"
#include "mfg/poisson.hpp"
#include "mfg/primal_solver.hpp"
#include "mfg/rootfind.hpp"

namespace mfg {

std::optional<double> evaluate_B(const ProblemSpec& spec, const Field& m, const Field& w) {
  if (m.kind != FieldKind::CellScalar || w.kind != FieldKind::FaceVector || !(m.grid == w.grid))
    throw std::invalid_argument("evaluate_B: need cell m and face w on one grid");
  const TorusGrid& grid = m.grid;
  const int d = grid.dim;
  double total = 0.0;
  for (std::ptrdiff_t c = 0; c < grid.cells(); ++c) {
    if (m[c] < 0.0) throw std::domain_error("evaluate_B: negative density");
    const Point x = grid.cell_center(c);
    Vec wc{0.0, 0.0};
    for (int a = 0; a < d; ++a) wc[a] = w.at_face(a, c);
    const auto persp = perspective_value(spec, x, m[c], wc);
    if (!persp) return std::nullopt;
    total += *persp + coupling_primitive(spec, x, m[c]);
  }
  return total * grid.cell_volume();
}

namespace {

// Pointwise prox of (a,b) -> F*(x, a + kap|b|^r + V) - a with step 1/rho,
// for the power family. Updates (a, b) in place, returns the density
// m = (F*)'(a + H(x,b)); `mwarm` seeds and stores the Newton iterate.
struct CellProx {
  double cf, q, kap, r;
  double rho;
  int d;

  double apply(double& a, double* b, double V, double g, double& mwarm) const {
    const double t = 1.0 / rho;
    double bn2 = 0.0;
    for (int i = 0; i < d; ++i) bn2 += b[i] * b[i];
    const double bn = std::sqrt(bn2);
    const double s0 = a + t + kap * (r == 2.0 ? bn2 : std::pow(bn, r)) + V;
    if (s0 <= g) {  // flat region of F*: m = 0, b untouched
      a += t;
      mwarm = 0.0;
      return 0.0;
    }
    auto beta = [&](double m) {  // |b|(m): |b| + t*m*kap*r*|b|^(r-1) = bn
      if (bn == 0.0) return 0.0;
      if (r == 2.0) return bn / (1.0 + 2.0 * t * m * kap);
      return newton_bisect(
          [&](double be) { return be + t * m * kap * r * std::pow(be, r - 1.0) - bn; },
          [&](double be) { return 1.0 + t * m * kap * r * (r - 1.0) * std::pow(be, r - 2.0); },
          0.0, bn, 0.5 * bn, 1e-15 * (1.0 + bn));
    };
    auto fm = [&](double m) { return q == 2.0 ? cf * m : cf * std::pow(m, q - 1.0); };
    auto chi = [&](double m) {
      const double be = beta(m);
      return fm(m) + g - (a + t * (1.0 - m) + kap * (r == 2.0 ? be * be : std::pow(be, r)) + V);
    };
    auto dchi = [&](double m) {
      const double be = beta(m);
      const double kr = kap * r * (r == 2.0 ? be : std::pow(be, r - 1.0));
      const double denom =
          1.0 + t * m * kap * r * (r - 1.0) * (r == 2.0 ? 1.0 : std::pow(be, r - 2.0));
      const double dfm =
          q == 2.0 ? cf : cf * (q - 1.0) * std::pow(std::max(m, 1e-300), q - 2.0);
      return dfm + t + t * kr * kr / denom;
    };
    const double hi = q == 2.0 ? (s0 - g) / cf : std::pow((s0 - g) / cf, 1.0 / (q - 1.0));
    double m;
    if (bn == 0.0 && q == 2.0) {
      m = (s0 - g) / (cf + t);
    } else {
      const double x0 = std::clamp(mwarm, 0.0, hi);
      m = newton_bisect(chi, dchi, 0.0, hi, x0, 1e-13 * (1.0 + std::fabs(s0 - g)));
    }
    a += t * (1.0 - m);
    if (bn > 0.0) {
      const double scale = beta(m) / bn;
      for (int i = 0; i < d; ++i) b[i] *= scale;
    }
    mwarm = m;
    return m;
  }
};

}  // namespace

DiscountSolution solve_dual(const ProblemSpec& spec, const TorusGrid& grid, double eps,
                            const SolverParams& params, const DiscountSolution* warm_start) {
  if (!(eps > 0.0)) throw std::invalid_argument("solve_dual: eps must be > 0");
  if (!spec.power_form())
    throw std::invalid_argument("solve_dual: power-form Hamiltonian and coupling required");
  if (spec.dimension != grid.dim) throw std::invalid_argument("solve_dual: dimension mismatch");
  const auto t_start = std::chrono::steady_clock::now();

  const std::ptrdiff_t N = grid.cells();
  const int d = grid.dim;
  const double h = grid.h();
  const double kap = spec.hamiltonian.kappa, r = spec.r();
  const double cf = spec.coupling.c_f, q = spec.q();

  std::vector<double> Vc(N), gc(N);
  for (std::ptrdiff_t c = 0; c < N; ++c) {
    const Point x = grid.cell_center(c);
    Vc[c] = spec.potential(x);
    gc[c] = spec.coupling_offset(x);
  }

  PeriodicHelmholtz helm(grid);
  double rho = params.rho;

  Field phi = Field::cell_scalar(grid);
  Field m = Field::cell_scalar(grid, 1.0);
  Field qa = Field::cell_scalar(grid), qb = Field::face_vector(grid);
  Field ya = Field::cell_scalar(grid), yb = Field::face_vector(grid);
  if (warm_start) {
    phi = warm_start->u;
    m = warm_start->m;
    qa = phi;
    qa *= eps;
    qb = discrete_gradient(phi);
    for (std::ptrdiff_t c = 0; c < N; ++c) ya[c] = (m[c] - 1.0) / rho;
    yb = warm_start->w;
    yb *= -1.0 / rho;
  }
  if (params.perturbation > 0.0) {
    std::mt19937_64 gen(params.seed);
    std::uniform_real_distribution<double> noise(-params.perturbation, params.perturbation);
    for (std::ptrdiff_t c = 0; c < N; ++c) phi[c] += noise(gen);
    qa = phi;
    qa *= eps;
    qb = discrete_gradient(phi);
  }

  CellProx prox{cf, q, kap, r, rho, d};

  auto recover_w = [&](Field& w) {
    par_for(N, [&](std::ptrdiff_t c) {
      double bn2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double ba = qb.at_face(a, c);
        bn2 += ba * ba;
      }
      const double bn = std::sqrt(bn2);
      const double scale =
          bn > 0.0 ? -m[c] * kap * r * (r == 2.0 ? 1.0 : std::pow(bn, r - 2.0)) : 0.0;
      for (int a = 0; a < d; ++a) w.at_face(a, c) = scale * qb.at_face(a, c);
    });
  };

  // B(m, -m DpH(b)) via m*H*(DpH(b)) = m*(kap*(r-1)*|b|^r - V), plus F(m).
  auto objective_on_iterate = [&]() {
    double total = 0.0;
    for (std::ptrdiff_t c = 0; c < N; ++c) {
      double bn2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double ba = qb.at_face(a, c);
        bn2 += ba * ba;
      }
      const double bnr = r == 2.0 ? bn2 : std::pow(std::sqrt(bn2), r);
      const double F = (q == 2.0 ? 0.5 * cf * m[c] * m[c] : cf / q * std::pow(m[c], q)) +
                       gc[c] * m[c];
      total += m[c] * (kap * (r - 1.0) * bnr - Vc[c]) + F;
    }
    return total * grid.cell_volume();
  };

  SolverDiagnostics diag;
  Field gphi, ra = Field::cell_scalar(grid), rb = Field::face_vector(grid);
  Field w_tmp = Field::face_vector(grid);
  bool done = false;
  long it = 0;
  for (; it < params.max_iter && !done; ++it) {
    // phi-step: (eps^2 I - Lap) phi = Lam^T (q - y)
    for (std::ptrdiff_t c = 0; c < N; ++c) ra[c] = qa[c] - ya[c];
    for (std::ptrdiff_t i = 0; i < rb.size(); ++i) rb[i] = qb[i] - yb[i];
    Field rhs = discrete_divergence(rb);
    par_for(N, [&](std::ptrdiff_t c) { rhs[c] = eps * ra[c] - rhs[c]; });
    phi = helm.solve(eps * eps, rhs);
    gphi = discrete_gradient(phi);

    // q-step: cellwise prox at (eps*phi + ya, grad phi + yb)
    par_for(N, [&](std::ptrdiff_t c) {
      double a = eps * phi[c] + ya[c];
      double b[2];
      for (int ax = 0; ax < d; ++ax) b[ax] = gphi.at_face(ax, c) + yb.at_face(ax, c);
      double mw = m[c];
      m[c] = prox.apply(a, b, Vc[c], gc[c], mw);
      qa[c] = a;
      for (int ax = 0; ax < d; ++ax) qb.at_face(ax, c) = b[ax];
    });

    // multiplier update; ra, rb hold the primal residual afterwards
    par_for(N, [&](std::ptrdiff_t c) {
      ra[c] = eps * phi[c] - qa[c];
      ya[c] += ra[c];
      for (int ax = 0; ax < d; ++ax) {
        const std::ptrdiff_t i = ax * N + c;
        rb[i] = gphi[i] - qb[i];
        yb[i] += rb[i];
      }
    });

    if ((it + 1) % params.check_interval != 0) continue;

    const double pra = l2_norm(ra), prb = l2_norm(rb);
    const double primal_res = std::sqrt(pra * pra + prb * prb);
    // Dual residual = K_eps constraint violation of the recovered (m, w).
    recover_w(w_tmp);
    Field cviol = discrete_divergence(w_tmp);
    for (std::ptrdiff_t c = 0; c < N; ++c) cviol[c] += eps * (m[c] - 1.0);
    const double dual_res = l2_norm(cviol);
    const double B = objective_on_iterate();
    const double A = evaluate_A(spec, phi, eps);
    const double gap = std::fabs(A + B);

    diag.primal_residual_history.push_back(primal_res);
    diag.dual_residual_history.push_back(dual_res);
    diag.gap_history.push_back(gap);
    diag.objective_history.push_back(B);
    diag.final_primal_residual = primal_res;
    diag.final_dual_residual = dual_res;
    diag.final_gap = gap;

    if (primal_res <= params.tol_primal && dual_res <= params.tol_dual &&
        gap <= params.tol_gap * (1.0 + std::fabs(B))) {
      done = true;
    } else if (params.adaptive_rho && (it + 1) % (5 * params.check_interval) == 0) {
      if (primal_res > 10.0 * dual_res && rho < 1e6) {
        rho *= 2.0;
        ya *= 0.5;
        yb *= 0.5;
      } else if (dual_res > 10.0 * primal_res && rho > 1e-6) {
        rho *= 0.5;
        ya *= 2.0;
        yb *= 2.0;
      }
      prox.rho = rho;
    }
  }

  diag.iterations = it;
  diag.converged = done;
  diag.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (!done) throw ConvergenceError("solve_dual: iteration cap reached", std::move(diag));

  DiscountSolution sol;
  sol.epsilon = eps;
  sol.u = phi;
  sol.w = Field::face_vector(grid);
  recover_w(sol.w);

  // Exact mass repair: spread the defect over well-supported cells so the
  // strict perspective value stays finite (no flux enters {m = 0}).
  double mmax = 0.0;
  for (std::ptrdiff_t c = 0; c < N; ++c) mmax = std::max(mmax, m[c]);
  const double thresh = 1e-3 * mmax;
  std::ptrdiff_t nsupp = 0;
  for (std::ptrdiff_t c = 0; c < N; ++c)
    if (m[c] > thresh) ++nsupp;
  const double defect = integrate(m) - 1.0;
  if (nsupp > 0) {
    const double shift = defect / (double(nsupp) * grid.cell_volume());
    for (std::ptrdiff_t c = 0; c < N; ++c)
      if (m[c] > thresh) m[c] = std::max(m[c] - shift, 0.0);
  }
  sol.m = m;
  const auto B_final = evaluate_B(spec, sol.m, sol.w);
  sol.objective_B = B_final ? *B_final : diag.objective_history.back();
  sol.diagnostics = std::move(diag);
  return sol;
}

}  // namespace mfg
