#include "mfg/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfg/example.hpp"

namespace mfg {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

template <class T>
T get_or(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + where + "." + key);
  }
}

PotentialConfig parse_potential(const json& obj, const std::string& where) {
  check_keys(obj, where, {"name", "amplitude", "frequency"});
  PotentialConfig pc;
  pc.name = get_or<std::string>(obj, "name", where, "zero");
  pc.amplitude = get_or<double>(obj, "amplitude", where, 1.0);
  pc.frequency = get_or<double>(obj, "frequency", where, 1.0);
  if (pc.name != "zero" && pc.name != "triangle_wave" && pc.name != "cosine")
    throw ConfigError("unknown potential \"" + pc.name + "\" in " + where);
  return pc;
}

json potential_to_json(const PotentialConfig& pc) {
  return json{{"name", pc.name}, {"amplitude", pc.amplitude}, {"frequency", pc.frequency}};
}

}  // namespace

double evaluate_potential(const PotentialConfig& pc, int dim, const Point& x) {
  if (pc.name == "zero") return 0.0;
  if (pc.name == "triangle_wave") {
    if (dim != 1) throw ConfigError("triangle_wave potential is 1-D only");
    return example::potential(x[0]);
  }
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += std::cos(2.0 * M_PI * pc.frequency * x[a]);
  return pc.amplitude * s;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  check_keys(root, "config", {"problem", "grid", "solver", "sweep", "output"});
  RunConfig rc;

  if (root.contains("problem")) {
    const json& p = root["problem"];
    check_keys(p, "problem", {"dimension", "hamiltonian", "coupling"});
    rc.dimension = get_or<int>(p, "dimension", "problem", 1);
    if (p.contains("hamiltonian")) {
      const json& hj = p["hamiltonian"];
      check_keys(hj, "problem.hamiltonian", {"kappa", "r", "potential"});
      rc.kappa = get_or<double>(hj, "kappa", "problem.hamiltonian", 0.5);
      rc.r = get_or<double>(hj, "r", "problem.hamiltonian", 2.0);
      if (hj.contains("potential"))
        rc.potential = parse_potential(hj["potential"], "problem.hamiltonian.potential");
    }
    if (p.contains("coupling")) {
      const json& cj = p["coupling"];
      check_keys(cj, "problem.coupling", {"c_f", "q", "offset"});
      rc.c_f = get_or<double>(cj, "c_f", "problem.coupling", 1.0);
      rc.q = get_or<double>(cj, "q", "problem.coupling", 2.0);
      if (cj.contains("offset"))
        rc.offset = parse_potential(cj["offset"], "problem.coupling.offset");
    }
  }
  if (root.contains("grid")) {
    check_keys(root["grid"], "grid", {"n"});
    rc.n = get_or<int>(root["grid"], "n", "grid", 64);
  }
  if (root.contains("solver")) {
    const json& s = root["solver"];
    check_keys(s, "solver",
               {"rho", "adaptive_rho", "tol_primal", "tol_dual", "tol_gap", "max_iter",
                "check_interval", "seed", "perturbation"});
    rc.solver.rho = get_or<double>(s, "rho", "solver", rc.solver.rho);
    rc.solver.adaptive_rho = get_or<bool>(s, "adaptive_rho", "solver", rc.solver.adaptive_rho);
    rc.solver.tol_primal = get_or<double>(s, "tol_primal", "solver", rc.solver.tol_primal);
    rc.solver.tol_dual = get_or<double>(s, "tol_dual", "solver", rc.solver.tol_dual);
    rc.solver.tol_gap = get_or<double>(s, "tol_gap", "solver", rc.solver.tol_gap);
    rc.solver.max_iter = get_or<long>(s, "max_iter", "solver", rc.solver.max_iter);
    rc.solver.check_interval = get_or<int>(s, "check_interval", "solver", rc.solver.check_interval);
    rc.solver.seed = get_or<unsigned long>(s, "seed", "solver", rc.solver.seed);
    rc.solver.perturbation = get_or<double>(s, "perturbation", "solver", rc.solver.perturbation);
    if (!(rc.solver.rho > 0.0)) throw ConfigError("solver.rho must be positive");
    if (rc.solver.max_iter <= 0) throw ConfigError("solver.max_iter must be positive");
  }
  if (root.contains("sweep")) {
    check_keys(root["sweep"], "sweep", {"epsilons"});
    rc.sweep_epsilons = get_or<std::vector<double>>(root["sweep"], "epsilons", "sweep", {});
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"directory", "formats"});
    rc.output_directory = get_or<std::string>(o, "directory", "output", rc.output_directory);
    rc.formats = get_or<std::vector<std::string>>(o, "formats", "output", rc.formats);
    for (const auto& f : rc.formats)
      if (f != "csv" && f != "json" && f != "dump")
        throw ConfigError("unknown output format \"" + f + "\"");
  }
  if (rc.dimension != 1 && rc.dimension != 2)
    throw ConfigError("problem.dimension must be 1 or 2");
  if (rc.n < 4) throw ConfigError("grid.n must be at least 4");
  return rc;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json root{
      {"problem",
       {{"dimension", dimension},
        {"hamiltonian",
         {{"kappa", kappa}, {"r", r}, {"potential", potential_to_json(potential)}}},
        {"coupling", {{"c_f", c_f}, {"q", q}, {"offset", potential_to_json(offset)}}}}},
      {"grid", {{"n", n}}},
      {"solver",
       {{"rho", solver.rho},
        {"adaptive_rho", solver.adaptive_rho},
        {"tol_primal", solver.tol_primal},
        {"tol_dual", solver.tol_dual},
        {"tol_gap", solver.tol_gap},
        {"max_iter", solver.max_iter},
        {"check_interval", solver.check_interval},
        {"seed", solver.seed},
        {"perturbation", solver.perturbation}}},
      {"sweep", {{"epsilons", sweep_epsilons}}},
      {"output", {{"directory", output_directory}, {"formats", formats}}}};
  return root.dump(2);
}

ProblemSpec RunConfig::make_problem() const {
  HamiltonianSpec ham;
  ham.kappa = kappa;
  ham.r = r;
  if (potential.name != "zero") {
    const PotentialConfig pc = potential;
    const int d = dimension;
    ham.potential = [pc, d](const Point& x) { return evaluate_potential(pc, d, x); };
  }
  CouplingSpec cpl;
  cpl.c_f = c_f;
  cpl.q = q;
  if (offset.name != "zero") {
    const PotentialConfig pc = offset;
    const int d = dimension;
    cpl.g = [pc, d](const Point& x) { return evaluate_potential(pc, d, x); };
  }
  return ProblemSpec(std::move(ham), std::move(cpl), dimension);
}

TorusGrid RunConfig::make_grid() const { return TorusGrid(dimension, n); }

}  // namespace mfg
