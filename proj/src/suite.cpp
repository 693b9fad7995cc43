#include "mfg/suite.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "mfg/dual_solver.hpp"
#include "mfg/ergodic.hpp"
#include "mfg/example.hpp"
#include "mfg/primal_solver.hpp"
#include "mfg/verification.hpp"

namespace mfg {

namespace {

std::vector<double> geometric_schedule(double first, int count) {
  std::vector<double> eps(count);
  for (int k = 0; k < count; ++k) eps[k] = first * std::pow(2.0, -k);
  return eps;
}

struct Suite {
  std::ostream& log;
  double scale;
  std::vector<CriterionResult> results;

  ProblemSpec spec = example::make_spec();
  TorusGrid grid512{1, 512};
  DiscountSolution sol01;          // eps = 0.1, n = 512
  ErgodicSolution sweep512;        // filled by criterion 3
  bool have_sweep512 = false;

  void record(int index, const std::string& name, bool pass, const std::string& detail) {
    results.push_back({index, name, pass, detail});
    log << (pass ? "PASS" : "FAIL") << " criterion " << index << ": " << name << " (" << detail
        << ")\n";
  }

  void guarded(int index, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      record(index, name, false, std::string("exception: ") + e.what());
    }
  }

  void c1_duality_gap() {
    sol01 = solve_dual(spec, grid512, 0.1);
    const PrimalIterate primal = solve_primal(spec, grid512, 0.1);
    const double B = sol01.objective_B;
    const double gap = std::fabs(primal.objective_A + B);
    const double tol = scale * 1e-4 * (1.0 + std::fabs(B));
    std::ostringstream d;
    d << "|A+B| = " << gap << " vs " << tol << ", A = " << primal.objective_A << ", B = " << B;
    record(1, "duality-gap closure at n=512, eps=0.1", gap <= tol, d.str());
  }

  void c2_uniqueness() {
    SolverParams p;
    p.perturbation = 1.0;
    p.seed = 12345;
    const DiscountSolution a = solve_dual(spec, grid512, 0.1, p);
    p.seed = 98765;
    const DiscountSolution b = solve_dual(spec, grid512, 0.1, p);
    const double dm = l1_norm(a.m - b.m);
    const double du = linf_norm(a.u - b.u);
    std::ostringstream d;
    d << "|m1-m2|_L1 = " << dm << " vs " << scale * 1e-3 << ", |u1-u2|_inf = " << du << " vs "
      << scale * 1e-2;
    record(2, "uniqueness under random initialization", dm <= scale * 1e-3 && du <= scale * 1e-2,
           d.str());
  }

  void c3_ergodic_constant() {
    sweep512 = vanishing_discount_sweep(spec, grid512, geometric_schedule(0.1, 8));
    have_sweep512 = true;
    const double lam = sweep512.lambda;
    bool monotone = true;
    const auto& rows = sweep512.sweep;
    for (std::size_t k = rows.size() - 3; k < rows.size(); ++k)
      monotone = monotone &&
                 std::fabs(rows[k].lambda_estimate) < std::fabs(rows[k - 1].lambda_estimate);
    std::ostringstream d;
    d << "|lambda| = " << std::fabs(lam) << " vs " << scale * 2e-2
      << ", tail |eps*int u| monotone decreasing: " << (monotone ? "yes" : "no");
    record(3, "ergodic constant lambda -> 0", std::fabs(lam) <= scale * 2e-2 && monotone, d.str());
  }

  void c4_density_recovery() {
    // Coupled refinement: the density error is dominated by the final eps of
    // the sweep (the pure-h component sits below it, since max{W,0} is
    // exactly representable on these grids), so the schedule deepens with n.
    double prev_err = 1e300, err_final = 0.0;
    bool refine_ok = true;
    std::ostringstream d;
    int levels = 8;
    for (int n : {128, 256, 512}) {
      TorusGrid g(1, n);
      const ErgodicSolution s = vanishing_discount_sweep(spec, g, geometric_schedule(0.1, levels));
      const double err = l1_norm(s.m - example::sample_cells(g, example::density));
      refine_ok = refine_ok && err < prev_err;
      prev_err = err;
      err_final = err;
      d << "err(n=" << n << ", levels=" << levels << ") = " << err << ", ";
      levels += 2;
    }
    d << "final vs " << scale * 5e-2;
    record(4, "density recovery m -> max{W,0} with refinement",
           err_final <= scale * 5e-2 && refine_ok, d.str());
  }

  void c5_selection() {
    if (!have_sweep512) throw std::runtime_error("sweep unavailable");
    const Field u_tilde = example::selected_limit(grid512);
    const double du = linf_norm(sweep512.u - u_tilde);

    // 65-point theta study of the oracle selection value.
    const int npts = 65;
    const double step = (example::kThetaMax - example::kThetaMin) / (npts - 1);
    double best_theta = example::kThetaMin, best_val = 1e300;
    for (int i = 0; i < npts; ++i) {
      const double th = example::kThetaMin + i * step;
      const double val = example::selection_value(th);
      if (val < best_val) {
        best_val = val;
        best_theta = th;
      }
    }
    const bool argmin_ok = std::fabs(best_theta - 0.25) <= step + 1e-12;

    double worst_deriv = 0.0;
    const double dth = 1e-5;
    for (double th : {0.15, 0.2, 0.22, 0.28, 0.3, 0.35}) {
      const double central =
          (example::selection_value(th + dth) - example::selection_value(th - dth)) / (2.0 * dth);
      worst_deriv = std::max(worst_deriv,
                             std::fabs(central - example::selection_derivative(th)));
    }
    std::ostringstream d;
    d << "|<u>-u_tilde|_inf = " << du << " vs " << scale * 5e-2 << ", argmin theta = " << best_theta
      << ", max |d/dtheta mismatch| = " << worst_deriv << " vs " << scale * 1e-6;
    record(5, "selection of the theta=1/4 limit",
           du <= scale * 5e-2 && argmin_ok && worst_deriv <= scale * 1e-6, d.str());
  }

  void c6_oracle_certificates() {
    const Field m_oracle = example::sample_cells(grid512, example::density);
    const Field w_zero = Field::face_vector(grid512);
    double worst_eq = 0.0, worst_sub = 0.0, worst_fp = 0.0;
    double min_v_violation = 1e300;
    for (int i = 0; i < 9; ++i) {
      const double th = example::kThetaMin + i * (example::kThetaMax - example::kThetaMin) / 8.0;
      Field u = Field::cell_scalar(grid512);
      Field v = Field::cell_scalar(grid512);
      for (std::ptrdiff_t c = 0; c < grid512.cells(); ++c) {
        const double x = grid512.cell_center(c)[0];
        u[c] = example::u_theta(th, x);
        v[c] = example::v_theta(th, x);
      }
      const ResidualReport rep =
          weak_solution_residuals(spec, u, m_oracle, w_zero, SolutionMode::Ergodic, 0.0);
      worst_eq = std::max(worst_eq, rep.eq_residual_on_support);
      worst_sub = std::max(worst_sub, rep.subsol_violation);
      worst_fp = std::max(worst_fp, rep.fp_residual);
      if (i > 0 && i < 8) {  // interior thetas: the kink sits where W < 0
        const Field rhs = Field::cell_scalar(grid512);  // f(x,0) + lambda = 0
        min_v_violation = std::min(min_v_violation, supersolution_proxy(spec, v, rhs));
      }
    }
    const double Ch = 1.0 * grid512.h();
    std::ostringstream d;
    d << "eq = " << worst_eq << ", subsol = " << worst_sub << " vs " << scale * 1e-10
      << ", fp = " << worst_fp << " vs " << Ch << ", min v-violation = " << min_v_violation
      << " vs >= 0.5";
    record(6, "analytic weak-solution certificate + v counterexample",
           worst_eq <= scale * 1e-10 && worst_sub <= scale * 1e-10 && worst_fp <= Ch &&
               min_v_violation >= 0.5,
           d.str());
  }

  void c7_constant_instance() {
    const ProblemSpec flat = example::make_flat_spec();
    TorusGrid g(1, 128);
    bool ok = true;
    double worst = 0.0;
    for (double eps : {1.0, 0.5, 0.1, 0.02}) {
      const DiscountSolution s = solve_dual(flat, g, eps);
      Field uref = Field::cell_scalar(g, 1.0 / eps);
      Field mref = Field::cell_scalar(g, 1.0);
      worst = std::max({worst, linf_norm(s.u - uref), linf_norm(s.m - mref)});
    }
    const ErgodicSolution es = vanishing_discount_sweep(flat, g, geometric_schedule(0.1, 4));
    worst = std::max(worst, std::fabs(es.lambda - (-1.0)));
    ok = worst <= scale * 1e-8;
    std::ostringstream d;
    d << "max deviation from (u=1/eps, m=1, lambda=-1) = " << worst << " vs " << scale * 1e-8;
    record(7, "flat instance solved exactly", ok, d.str());
  }

  void c8_structural() {
    // adjointness of grad/div on random fields
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst_adj = 0.0;
    for (const TorusGrid& g : {TorusGrid(1, 257), TorusGrid(2, 48)}) {
      Field phi = Field::cell_scalar(g), w = Field::face_vector(g);
      for (std::ptrdiff_t i = 0; i < phi.size(); ++i) phi[i] = uni(gen);
      for (std::ptrdiff_t i = 0; i < w.size(); ++i) w[i] = uni(gen);
      worst_adj = std::max(worst_adj,
                           std::fabs(inner(discrete_divergence(w), phi) +
                                     inner(w, discrete_gradient(phi))));
    }

    // Fenchel-Young equality F(m) + F*(f(x,m)) = m f(x,m) on samples
    double worst_fy = 0.0;
    for (double m : {0.0, 0.3, 1.0, 2.5, 7.0})
      for (double xv : {0.05, 0.3, 0.55, 0.8}) {
        const Point x{xv, 0.0};
        const double a = spec.f(x, m);
        worst_fy = std::max(worst_fy, std::fabs(coupling_primitive(spec, x, m) +
                                                coupling_conjugate(spec, x, a) - m * a));
      }

    // perspective_prox optimality against a local grid search
    double worst_prox = 0.0;
    for (double mt : {0.0, 0.5, 2.0})
      for (double wt : {-1.5, 0.0, 0.8}) {
        const Point x{0.3, 0.0};
        const ProxPoint p = perspective_prox(spec, x, 0.7, mt, {wt, 0.0});
        auto obj = [&](double m, double w) {
          const auto val = perspective_value(spec, x, m, {w, 0.0});
          if (!val) return 1e300;
          return *val + ((m - mt) * (m - mt) + (w - wt) * (w - wt)) / (2.0 * 0.7);
        };
        const double at_prox = obj(p.m, p.w[0]);
        for (int i = -4; i <= 4; ++i)
          for (int j = -4; j <= 4; ++j) {
            const double m = std::max(p.m + 0.01 * i, 0.0);
            worst_prox = std::max(worst_prox, at_prox - obj(m, p.w[0] + 0.01 * j));
          }
      }

    // H1 monitor of m across a warm-started schedule (n=256 keeps it cheap)
    double h1_min = 1e300, h1_max = 0.0;
    {
      TorusGrid g(1, 256);
      DiscountSolution s;
      bool first = true;
      for (double eps : geometric_schedule(0.1, 8)) {
        s = solve_dual(spec, g, eps, {}, first ? nullptr : &s);
        first = false;
        const double h1 = sobolev_h1_norm(s.m);
        h1_min = std::min(h1_min, h1);
        h1_max = std::max(h1_max, h1);
      }
    }
    const bool h1_ok = h1_max <= 2.0 * h1_min;
    std::ostringstream d;
    d << "adjointness = " << worst_adj << " vs " << scale * 1e-13 << ", Fenchel-Young = "
      << worst_fy << " vs " << scale * 1e-10 << ", prox suboptimality = " << worst_prox
      << ", H1 ratio = " << h1_max / h1_min << " vs 2";
    record(8, "structural properties",
           worst_adj <= scale * 1e-13 && worst_fy <= scale * 1e-10 && worst_prox <= 1e-9 && h1_ok,
           d.str());
  }
};

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& log, double tol_scale) {
  Suite s{log, tol_scale};
  s.guarded(1, "duality-gap closure at n=512, eps=0.1", [&] { s.c1_duality_gap(); });
  s.guarded(2, "uniqueness under random initialization", [&] { s.c2_uniqueness(); });
  s.guarded(3, "ergodic constant lambda -> 0", [&] { s.c3_ergodic_constant(); });
  s.guarded(4, "density recovery m -> max{W,0} with refinement", [&] { s.c4_density_recovery(); });
  s.guarded(5, "selection of the theta=1/4 limit", [&] { s.c5_selection(); });
  s.guarded(6, "analytic weak-solution certificate + v counterexample",
            [&] { s.c6_oracle_certificates(); });
  s.guarded(7, "flat instance solved exactly", [&] { s.c7_constant_instance(); });
  s.guarded(8, "structural properties", [&] { s.c8_structural(); });
  return s.results;
}

}  // namespace mfg
