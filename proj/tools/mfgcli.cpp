#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mfg/config.hpp"
#include "mfg/dual_solver.hpp"
#include "mfg/ergodic.hpp"
#include "mfg/example.hpp"
#include "mfg/field_io.hpp"
#include "mfg/primal_solver.hpp"
#include "mfg/suite.hpp"
#include "mfg/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConvergence = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

std::string config_hash(const std::string& text) {
  // FNV-1a, hex; stable across platforms for the manifest.
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << std::hex << h;
  return ss.str();
}

fs::path resolve_outdir(const std::string& cli_out, const mfg::RunConfig& rc) {
  if (!cli_out.empty()) return cli_out;
  if (const char* root = std::getenv("MFG_OUTPUT_ROOT"))
    return fs::path(root) / rc.output_directory;
  return rc.output_directory;
}

void write_manifest(const fs::path& dir, const std::string& cfg_text, const std::string& command,
                    double wall_seconds) {
  json j{{"command", command},
         {"config_hash", config_hash(cfg_text)},
         {"mfg_version", "1.0.0"},
         {"json_version", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR)},
         {"wall_time_seconds", wall_seconds}};
  std::ofstream(dir / "manifest.json") << j.dump(2) << "\n";
}

void write_fields(const fs::path& dir, const mfg::RunConfig& rc, const mfg::Field& u,
                  const mfg::Field& m, const mfg::Field* w) {
  for (const std::string& fmt : rc.formats) {
    if (fmt == "csv") {
      mfg::write_csv(u, (dir / "u.csv").string());
      mfg::write_csv(m, (dir / "m.csv").string());
      if (w) mfg::write_csv(*w, (dir / "w.csv").string());
    } else if (fmt == "dump") {
      mfg::write_dump(u, (dir / "u.dump").string());
      mfg::write_dump(m, (dir / "m.dump").string());
      if (w) mfg::write_dump(*w, (dir / "w.dump").string());
    }
  }
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int cmd_solve(const std::string& cfg_path, double eps, const std::string& out, long seed_override) {
  Timer timer;
  mfg::RunConfig rc = mfg::RunConfig::load(cfg_path);
  if (seed_override >= 0) rc.solver.seed = static_cast<unsigned long>(seed_override);
  const mfg::ProblemSpec spec = rc.make_problem();
  const mfg::TorusGrid grid = rc.make_grid();
  const fs::path dir = resolve_outdir(out, rc);
  fs::create_directories(dir);

  mfg::DiscountSolution sol;
  try {
    sol = mfg::solve_dual(spec, grid, eps, rc.solver);
  } catch (const mfg::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (primal " << e.diagnostics.final_primal_residual
              << ", dual " << e.diagnostics.final_dual_residual << ")\n";
    return kExitConvergence;
  }
  const mfg::PrimalIterate primal = mfg::solve_primal(spec, grid, eps, rc.solver);
  const double gap = std::fabs(primal.objective_A + sol.objective_B);
  const mfg::ResidualReport rep = mfg::weak_solution_residuals(
      spec, sol.u, sol.m, sol.w, mfg::SolutionMode::Discount, eps);

  write_fields(dir, rc, sol.u, sol.m, &sol.w);
  json summary{{"epsilon", eps},
               {"objective_B", sol.objective_B},
               {"objective_A", primal.objective_A},
               {"duality_gap", gap},
               {"iterations", sol.diagnostics.iterations},
               {"primal_residual", sol.diagnostics.final_primal_residual},
               {"dual_residual", sol.diagnostics.final_dual_residual},
               {"residual_report", json::parse(rep.to_json())}};
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
  write_manifest(dir, rc.to_json_text(), "solve", timer.seconds());
  std::cout << "solve: eps = " << eps << ", B = " << sol.objective_B << ", gap = " << gap
            << ", outputs in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& cfg_path, const std::string& out) {
  Timer timer;
  mfg::RunConfig rc = mfg::RunConfig::load(cfg_path);
  if (rc.sweep_epsilons.empty()) {
    std::cerr << "error: sweep.epsilons is empty in " << cfg_path << "\n";
    return kExitUsage;
  }
  const mfg::ProblemSpec spec = rc.make_problem();
  const mfg::TorusGrid grid = rc.make_grid();
  const fs::path dir = resolve_outdir(out, rc);
  fs::create_directories(dir);

  mfg::ErgodicSolution es;
  try {
    es = mfg::vanishing_discount_sweep(spec, grid, rc.sweep_epsilons, rc.solver);
  } catch (const mfg::SweepError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  }
  std::ofstream csv(dir / "sweep.csv");
  csv.precision(17);
  csv << "epsilon,lambda_estimate,gap,iterations,du_sup,dm_l1\n";
  for (const auto& row : es.sweep)
    csv << row.epsilon << "," << row.lambda_estimate << "," << row.gap << "," << row.iterations
        << "," << row.du_sup << "," << row.dm_l1 << "\n";
  write_fields(dir, rc, es.u, es.m, nullptr);
  json summary{{"lambda", es.lambda}, {"levels", es.sweep.size()}};
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
  write_manifest(dir, rc.to_json_text(), "sweep", timer.seconds());
  std::cout << "sweep: lambda = " << es.lambda << ", outputs in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_select(const std::string& cfg_path, int theta_points, const std::string& out) {
  Timer timer;
  mfg::RunConfig rc = mfg::RunConfig::load(cfg_path);
  if (theta_points < 3) {
    std::cerr << "error: --theta-grid must be at least 3\n";
    return kExitUsage;
  }
  const fs::path dir = resolve_outdir(out, rc);
  fs::create_directories(dir);

  const double lo = mfg::example::kThetaMin, hi = mfg::example::kThetaMax;
  const double step = (hi - lo) / (theta_points - 1);
  std::ofstream csv(dir / "selection.csv");
  csv.precision(17);
  csv << "theta,value\n";
  double best_theta = lo, best_val = 1e300;
  for (int i = 0; i < theta_points; ++i) {
    const double th = lo + i * step;
    const double val = mfg::example::selection_value(th);
    csv << th << "," << val << "\n";
    if (val < best_val) {
      best_val = val;
      best_theta = th;
    }
  }
  json summary{{"argmin_theta", best_theta}, {"argmin_value", best_val}};

  if (!rc.sweep_epsilons.empty()) {
    const mfg::ProblemSpec spec = rc.make_problem();
    const mfg::TorusGrid grid = rc.make_grid();
    try {
      const mfg::ErgodicSolution es =
          mfg::vanishing_discount_sweep(spec, grid, rc.sweep_epsilons, rc.solver);
      const double solver_val = mfg::selection_functional(es.u, es.m);
      summary["solver_selection_value"] = solver_val;
      summary["solver_minus_oracle_min"] = solver_val - best_val;
    } catch (const mfg::SweepError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConvergence;
    }
  }
  std::ofstream(dir / "selection.json") << summary.dump(2) << "\n";
  write_manifest(dir, rc.to_json_text(), "select", timer.seconds());
  std::cout << "select: argmin theta = " << best_theta << ", outputs in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& cfg_path, const std::string& u_path, const std::string& m_path,
               const std::string& w_path, const std::string& mode, double value,
               const std::string& out) {
  Timer timer;
  mfg::RunConfig rc = mfg::RunConfig::load(cfg_path);
  const mfg::ProblemSpec spec = rc.make_problem();
  const mfg::Field u = mfg::read_dump(u_path);
  const mfg::Field m = mfg::read_dump(m_path);
  const mfg::Field w = mfg::read_dump(w_path);
  if (!(u.grid == m.grid) || !(u.grid == w.grid)) {
    std::cerr << "error: field dumps disagree on grid size\n";
    return kExitUsage;
  }
  const mfg::SolutionMode sm =
      mode == "ergodic" ? mfg::SolutionMode::Ergodic : mfg::SolutionMode::Discount;
  const mfg::ResidualReport rep = mfg::weak_solution_residuals(spec, u, m, w, sm, value);
  std::cout << rep.to_json() << "\n";
  const fs::path dir = resolve_outdir(out, rc);
  fs::create_directories(dir);
  std::ofstream(dir / "residuals.json") << rep.to_json() << "\n";
  write_manifest(dir, rc.to_json_text(), "verify", timer.seconds());
  const bool ok = rep.mass_error <= 1e-6 && rep.eq_residual_on_support <= 5e-3 &&
                  rep.subsol_violation <= 1e-6 && rep.fp_residual <= 1e-6;
  return ok ? kExitOk : kExitVerification;
}

int cmd_bench(const std::string& suite, double tol_scale) {
  if (suite != "acceptance") {
    std::cerr << "error: unknown suite \"" << suite << "\" (only \"acceptance\" exists)\n";
    return kExitUsage;
  }
  const auto results = mfg::run_acceptance(std::cout, tol_scale);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  std::cout << (all ? "all criteria passed" : "criteria FAILED") << "\n";
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch solver for stationary first-order discounted mean field games"};
  app.require_subcommand(1);

  std::string cfg, out, u_path, m_path, w_path, mode = "discount", suite = "acceptance";
  double eps = 0.1, value = 0.0, tol_scale = 1.0;
  int theta_points = 33;
  long seed = -1;

  auto* solve = app.add_subcommand("solve", "solve the discount problem at one epsilon");
  solve->add_option("--config", cfg, "config JSON path")->required();
  solve->add_option("--epsilon", eps, "discount factor");
  solve->add_option("--out", out, "output directory (overrides config)");
  solve->add_option("--seed", seed, "override solver seed");

  auto* sweep = app.add_subcommand("sweep", "vanishing-discount sweep over the config schedule");
  sweep->add_option("--config", cfg, "config JSON path")->required();
  sweep->add_option("--out", out, "output directory (overrides config)");

  auto* select = app.add_subcommand("select", "selection-functional study over theta");
  select->add_option("--config", cfg, "config JSON path")->required();
  select->add_option("--theta-grid", theta_points, "number of theta samples");
  select->add_option("--out", out, "output directory (overrides config)");

  auto* verify = app.add_subcommand("verify", "residual report for dumped fields");
  verify->add_option("--config", cfg, "config JSON path")->required();
  verify->add_option("--u", u_path, "u dump")->required();
  verify->add_option("--m", m_path, "m dump")->required();
  verify->add_option("--w", w_path, "w dump")->required();
  verify->add_option("--mode", mode, "discount or ergodic")
      ->check(CLI::IsMember({"discount", "ergodic"}));
  verify->add_option("--value", value, "epsilon (discount) or lambda (ergodic)");
  verify->add_option("--out", out, "output directory (overrides config)");

  auto* bench = app.add_subcommand("bench", "run the acceptance suite");
  bench->add_option("suite", suite, "suite name");
  bench->add_option("--tol-scale", tol_scale, "loosen every threshold by this factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg, eps, out, seed);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (select->parsed()) return cmd_select(cfg, theta_points, out);
    if (verify->parsed()) return cmd_verify(cfg, u_path, m_path, w_path, mode, value, out);
    if (bench->parsed()) return cmd_bench(suite, tol_scale);
  } catch (const mfg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mfg::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
