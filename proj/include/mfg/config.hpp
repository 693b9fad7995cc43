#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/dual_solver.hpp"
#include "mfg/grid.hpp"
#include "mfg/problem.hpp"

namespace mfg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Named scalar field on the torus; "zero", "triangle_wave" (the benchmark W,
// d=1), or "cosine": amplitude * sum_axes cos(2*pi*frequency*x_a).
struct PotentialConfig {
  std::string name = "zero";
  double amplitude = 1.0;
  double frequency = 1.0;
};

double evaluate_potential(const PotentialConfig& pc, int dim, const Point& x);

struct RunConfig {
  // problem
  int dimension = 1;
  double kappa = 0.5;
  double r = 2.0;
  double c_f = 1.0;
  double q = 2.0;
  PotentialConfig potential;  // V in the Hamiltonian
  PotentialConfig offset;     // g(x) = f(x, 0)
  // grid
  int n = 64;
  // solver
  SolverParams solver;
  // sweep
  std::vector<double> sweep_epsilons;
  // output
  std::string output_directory = "out";
  std::vector<std::string> formats = {"csv", "json"};

  // Throws ConfigError naming the offending key path; unknown keys rejected.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string to_json_text() const;

  ProblemSpec make_problem() const;
  TorusGrid make_grid() const;
};

}  // namespace mfg
