#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "mfg/example.hpp"
#include "mfg/verification.hpp"

using namespace mfg;
namespace ex = mfg::example;

namespace {

Field sample_u(const TorusGrid& g, double theta) {
  Field u = Field::cell_scalar(g);
  for (std::ptrdiff_t c = 0; c < g.cells(); ++c)
    u[c] = ex::u_theta(theta, g.cell_center(c)[0]);
  return u;
}

}  // namespace

TEST_CASE("oracle triples pass every clause at machine precision") {
  const ProblemSpec spec = ex::make_spec();
  TorusGrid g(1, 256);
  const Field m = ex::sample_cells(g, &ex::density);
  const Field w = Field::face_vector(g);
  for (double theta : {0.125, 0.2, 0.25, 0.3, 0.375}) {
    const ResidualReport rep =
        weak_solution_residuals(spec, sample_u(g, theta), m, w, SolutionMode::Ergodic, 0.0);
    CHECK(rep.eq_residual_on_support <= 1e-10);
    CHECK(rep.subsol_violation <= 1e-10);
    CHECK(rep.fp_residual == 0.0);
    CHECK(rep.mass_error <= 1e-12);  // piecewise-linear m, kinks on cell faces
    CHECK(rep.h1_norm_m > 1.0);
  }
}

TEST_CASE("flat discount solution has zero residuals") {
  const ProblemSpec flat = ex::make_flat_spec();
  TorusGrid g(1, 64);
  const double eps = 0.25;
  const ResidualReport rep =
      weak_solution_residuals(flat, Field::cell_scalar(g, 1.0 / eps), Field::cell_scalar(g, 1.0),
                              Field::face_vector(g), SolutionMode::Discount, eps);
  CHECK(rep.eq_residual_on_support <= 1e-12);
  CHECK(rep.subsol_violation <= 1e-12);
  CHECK(rep.fp_residual <= 1e-12);
  CHECK(rep.mass_error <= 1e-12);
  CHECK(rep.supersol_violation <= 1e-12);
}

TEST_CASE("corrupting the density shows up in the right fields") {
  const ProblemSpec spec = ex::make_spec();
  TorusGrid g(1, 128);
  Field m = ex::sample_cells(g, &ex::density);
  m[20] += 0.1;  // x = 0.16..., inside the support
  const ResidualReport rep =
      weak_solution_residuals(spec, sample_u(g, 0.25), m, Field::face_vector(g),
                              SolutionMode::Ergodic, 0.0);
  CHECK(rep.mass_error == doctest::Approx(0.1 / 128.0).epsilon(1e-10));
  // the bumped cell joins the support with target f = 0.1 while H stays at
  // its eikonal value 0 up to the O(h) sampling error
  CHECK(rep.eq_residual_on_support == doctest::Approx(0.1).epsilon(0.2));
}

TEST_CASE("fp residual sees a divergent flux") {
  const ProblemSpec spec = ex::make_spec();
  TorusGrid g(1, 128);
  Field w = Field::face_vector(g);
  w.at_face(0, 40) = 0.5;  // a single face: div = (+-) 0.5 * n at two cells
  const ResidualReport rep = weak_solution_residuals(
      spec, sample_u(g, 0.25), ex::sample_cells(g, &ex::density), w, SolutionMode::Ergodic, 0.0);
  CHECK(rep.fp_residual == doctest::Approx(0.5 * 128.0 * std::sqrt(2.0 / 128.0)).epsilon(1e-12));
}

TEST_CASE("supersolution proxy separates u_theta from v_theta") {
  const ProblemSpec spec = ex::make_spec();
  const Field zero_rhs128 = Field::cell_scalar(TorusGrid(1, 128));

  // v_theta fails the supersolution clause by |W| at the flipped kink
  for (double theta : {0.15, 0.2, 0.25, 0.3, 0.35}) {
    TorusGrid g(1, 128);
    Field v = Field::cell_scalar(g);
    for (std::ptrdiff_t c = 0; c < g.cells(); ++c)
      v[c] = ex::v_theta(theta, g.cell_center(c)[0]);
    CHECK(supersolution_proxy(spec, v, zero_rhs128) >= 0.5);
  }

  // the genuine solutions only show an O(h) sampling artifact
  std::vector<double> viols;
  for (int n : {128, 256, 512}) {
    TorusGrid g(1, n);
    viols.push_back(supersolution_proxy(spec, sample_u(g, 0.25), Field::cell_scalar(g)));
    CHECK(viols.back() <= 40.0 * g.h());
  }
  CHECK(viols.back() <= viols.front());
}

TEST_CASE("uniqueness_set geometry") {
  const ProblemSpec spec = ex::make_spec();
  TorusGrid g(1, 256);
  const Field m = ex::sample_cells(g, &ex::density);

  // lambda = 0: Z = {W >= 0} = closure of the support of m
  const Field mask = uniqueness_set(spec, m, 0.0);
  for (std::ptrdiff_t c = 0; c < g.cells(); ++c) {
    const double x = g.cell_center(c)[0];
    if (ex::potential(x) > 1e-6) CHECK(mask[c] == 1.0);
    // deep inside {W < 0} and away from the support closure
    if (ex::potential(x) < -0.5 && m[c] == 0.0) CHECK(mask[c] == 0.0);
  }

  // lambda below min H(x,0): the geometric set covers the torus
  const Field full = uniqueness_set(spec, Field::cell_scalar(g, 0.0), -5.0);
  CHECK(l1_norm(full) == doctest::Approx(1.0));

  // everywhere-positive density: closure{m > 0} covers the torus
  const Field full2 = uniqueness_set(spec, Field::cell_scalar(g, 1.0), 10.0);
  CHECK(l1_norm(full2) == doctest::Approx(1.0));
}

TEST_CASE("report serialization and input validation") {
  const ProblemSpec flat = ex::make_flat_spec();
  TorusGrid g(1, 64);
  const ResidualReport rep =
      weak_solution_residuals(flat, Field::cell_scalar(g, 4.0), Field::cell_scalar(g, 1.0),
                              Field::face_vector(g), SolutionMode::Discount, 0.25);
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j.at("mass_error").get<double>() == rep.mass_error);
  CHECK(j.at("h1_norm_m").get<double>() == rep.h1_norm_m);
  CHECK(j.size() == 6);

  CHECK_THROWS_AS(weak_solution_residuals(flat, Field::cell_scalar(g), Field::face_vector(g),
                                          Field::face_vector(g), SolutionMode::Discount, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(weak_solution_residuals(flat, Field::cell_scalar(g), Field::cell_scalar(g),
                                          Field::cell_scalar(g), SolutionMode::Discount, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(uniqueness_set(flat, Field::face_vector(g), 0.0), std::invalid_argument);
}

TEST_CASE("two-dimensional smoke check") {
  HamiltonianSpec h;
  h.kappa = 0.5;
  h.r = 2.0;
  CouplingSpec c;
  const ProblemSpec flat2(std::move(h), std::move(c), 2);
  TorusGrid g(2, 16);
  const double eps = 0.5;
  const ResidualReport rep =
      weak_solution_residuals(flat2, Field::cell_scalar(g, 1.0 / eps), Field::cell_scalar(g, 1.0),
                              Field::face_vector(g), SolutionMode::Discount, eps);
  CHECK(rep.eq_residual_on_support <= 1e-12);
  CHECK(rep.subsol_violation <= 1e-12);
  CHECK(rep.fp_residual <= 1e-12);
  CHECK(rep.supersol_violation <= 1e-12);
}
