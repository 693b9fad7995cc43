#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "mfg/config.hpp"
#include "mfg/example.hpp"
#include "mfg/field_io.hpp"

using namespace mfg;

namespace {

std::string temp_path(const std::string& stem) {
  return "mfg_test_" + stem + "_" + std::to_string(std::random_device{}()) + ".tmp";
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing: values, defaults, round trip") {
  const std::string text = R"({
    "problem": {
      "dimension": 1,
      "hamiltonian": {"kappa": 0.5, "r": 2.0, "potential": {"name": "triangle_wave"}},
      "coupling": {"c_f": 1.0, "q": 2.0}
    },
    "grid": {"n": 128},
    "solver": {"rho": 2.0, "max_iter": 5000, "seed": 7},
    "sweep": {"epsilons": [0.1, 0.05]},
    "output": {"directory": "runs/bench", "formats": ["csv", "dump"]}
  })";
  const RunConfig rc = RunConfig::from_json_text(text);
  CHECK(rc.dimension == 1);
  CHECK(rc.kappa == 0.5);
  CHECK(rc.potential.name == "triangle_wave");
  CHECK(rc.n == 128);
  CHECK(rc.solver.rho == 2.0);
  CHECK(rc.solver.max_iter == 5000);
  CHECK(rc.solver.seed == 7);
  CHECK(rc.solver.tol_gap == 1e-6);  // untouched default
  CHECK(rc.sweep_epsilons == std::vector<double>{0.1, 0.05});
  CHECK(rc.output_directory == "runs/bench");
  REQUIRE(rc.formats.size() == 2);
  CHECK(rc.formats[1] == "dump");

  // round trip through to_json_text
  const RunConfig back = RunConfig::from_json_text(rc.to_json_text());
  CHECK(back.to_json_text() == rc.to_json_text());
  CHECK(back.solver.rho == rc.solver.rho);
  CHECK(back.sweep_epsilons == rc.sweep_epsilons);

  // defaults from the empty object
  const RunConfig dflt = RunConfig::from_json_text("{}");
  CHECK(dflt.n == 64);
  CHECK(dflt.potential.name == "zero");
  CHECK(dflt.formats == std::vector<std::string>{"csv", "json"});
}

TEST_CASE("config rejection paths name the offending key") {
  auto message_of = [](const std::string& text) {
    try {
      RunConfig::from_json_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message_of(R"({"probelm": {}})").find("probelm") != std::string::npos);
  CHECK(message_of(R"({"solver": {"rho": "fast"}})").find("solver.rho") != std::string::npos);
  CHECK(message_of(R"({"problem": {"hamiltonian": {"kapa": 1}}})").find("kapa") !=
        std::string::npos);
  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"n": 2}})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"problem": {"dimension": 3}})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"solver": {"rho": -1.0}})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"solver": {"max_iter": 0}})"), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(
          R"({"problem": {"hamiltonian": {"potential": {"name": "sawtooth"}}}})"),
      ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"output": {"formats": ["yaml"]}})"), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("does_not_exist_anywhere.json"), ConfigError);
}

TEST_CASE("potentials evaluate as documented") {
  PotentialConfig zero;
  CHECK(evaluate_potential(zero, 2, Point{0.3, 0.7}) == 0.0);

  PotentialConfig tri;
  tri.name = "triangle_wave";
  CHECK(evaluate_potential(tri, 1, Point{0.25, 0.0}) ==
        doctest::Approx(example::potential(0.25)));
  CHECK_THROWS_AS(evaluate_potential(tri, 2, Point{0.25, 0.25}), ConfigError);

  PotentialConfig cosine;
  cosine.name = "cosine";
  cosine.amplitude = 2.0;
  cosine.frequency = 3.0;
  CHECK(evaluate_potential(cosine, 2, Point{0.0, 0.5}) ==
        doctest::Approx(2.0 * (1.0 + std::cos(3.0 * M_PI))).epsilon(1e-12));
}

TEST_CASE("make_problem and make_grid wire the config through") {
  RunConfig rc = RunConfig::from_json_text(R"({
    "problem": {"hamiltonian": {"potential": {"name": "triangle_wave"}}},
    "grid": {"n": 32}
  })");
  const ProblemSpec spec = rc.make_problem();
  const TorusGrid g = rc.make_grid();
  CHECK(g.n == 32);
  CHECK(spec.H(Point{0.0, 0.0}, Vec{0.0, 0.0}) == doctest::Approx(4.0));
  CHECK(spec.f(Point{0.0, 0.0}, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("binary dump round trip is exact") {
  TorusGrid g(2, 12);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  for (FieldKind kind : {FieldKind::CellScalar, FieldKind::FaceVector}) {
    Field f(kind, g);
    for (std::ptrdiff_t i = 0; i < f.size(); ++i) f[i] = uni(gen);
    FileGuard tmp{temp_path("dump")};
    write_dump(f, tmp.path);
    const Field back = read_dump(tmp.path);
    CHECK(back.kind == f.kind);
    CHECK(back.grid == g);
    bool identical = true;
    for (std::ptrdiff_t i = 0; i < f.size(); ++i) identical = identical && back[i] == f[i];
    CHECK(identical);
  }
}

TEST_CASE("dump reader rejects damaged files") {
  CHECK_THROWS_AS(read_dump("no_such_file.bin"), std::runtime_error);

  auto error_of = [](const std::string& path) {
    try {
      read_dump(path);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };

  FileGuard bad{temp_path("badmagic")};
  {
    std::ofstream out(bad.path, std::ios::binary);
    out << "NOPE garbage";
  }
  CHECK(error_of(bad.path).find("bad header") != std::string::npos);

  // valid header, truncated payload
  TorusGrid g(1, 16);
  FileGuard trunc{temp_path("trunc")};
  write_dump(Field::cell_scalar(g, 1.0), trunc.path);
  {
    std::ifstream in(trunc.path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
    data.resize(data.size() - 8);
    std::ofstream out(trunc.path, std::ios::binary | std::ios::trunc);
    out << data;
  }
  CHECK(error_of(trunc.path).find("truncated") != std::string::npos);
}

TEST_CASE("csv writer emits a header and one row per entry") {
  TorusGrid g(1, 8);
  Field f = Field::cell_scalar(g);
  f[2] = 1.5;
  FileGuard tmp{temp_path("csv")};
  write_csv(f, tmp.path);
  std::ifstream in(tmp.path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "index,x,y,value");
  int rows = 0, hits = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("1.5") != std::string::npos) ++hits;
  }
  CHECK(rows == 8);
  CHECK(hits == 1);

  Field w = Field::face_vector(g);
  FileGuard tmp2{temp_path("csvw")};
  write_csv(w, tmp2.path);
  std::ifstream in2(tmp2.path);
  REQUIRE(std::getline(in2, line));
  CHECK(line == "axis,index,x,y,value");
}
