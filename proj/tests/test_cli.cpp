#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "estokes/config.hpp"
#include "estokes/fit.hpp"

using namespace estokes;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

const char* kMinimalConfig = R"json({
  "mesh": {"nx": 4, "ny": 5, "rect": [0, 0, 1, 1]},
  "problem": {"type": "es", "pressure_bc": "neumann", "eps": 2.5,
              "eps_grid": "10:1000:10", "expansion_order": 2},
  "data": {
    "f": ["0", "0"],
    "div_f": "0",
    "u_b": ["x*(x-1)", "y*(y-1)"],
    "g_b_flux": ["2", "2"]
  },
  "output": {"dir": "out/test"}
})json";

}  // namespace

TEST_CASE("fit_slope reference cases") {
  SlopeFit f1 = fit_slope({{1.0, 1.0}, {10.0, 0.1}});
  CHECK_FALSE(f1.degenerate);
  CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f1.window_lo == 1.0);
  CHECK(f1.window_hi == 10.0);

  SlopeFit f2 = fit_slope({{1.0, 2.0}, {10.0, 2.0}});
  CHECK(f2.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f2.intercept == doctest::Approx(std::log10(2.0)).epsilon(1e-12));

  SlopeFit f3 = fit_slope({{10.0, 1e-3}, {100.0, 1e-5}, {1000.0, 1e-7}});
  CHECK(f3.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f3.n_used == 3);
}

TEST_CASE("fit_slope noise floor and degenerate handling") {
  // Points at or below 10x the floor fall out of the window.
  SlopeFit f = fit_slope({{1.0, 1.0}, {10.0, 0.1}, {100.0, 1e-9}}, 1e-10);
  CHECK(f.n_used == 2);
  CHECK(f.window_hi == 10.0);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK(fit_slope({}).degenerate);
  CHECK(fit_slope({{1.0, 1.0}}).degenerate);
  CHECK(fit_slope({{1.0, 1e-12}, {10.0, 1e-12}}, 1e-12).degenerate);
  CHECK(fit_slope({{-1.0, 1.0}, {10.0, 0.0}}).degenerate);
  SlopeFit d = fit_slope({});
  CHECK(d.window_lo == 0.0);
  CHECK(d.window_hi == 0.0);
}

TEST_CASE("parse_eps_grid") {
  auto g = parse_eps_grid("10:10000:10");
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(10.0));
  CHECK(g[3] == doctest::Approx(10000.0));

  auto h = parse_eps_grid("0.0001:0.1:10");
  REQUIRE(h.size() == 4);
  CHECK(h[0] == doctest::Approx(1e-4));
  CHECK(h[3] == doctest::Approx(1e-1));

  // Stop not on the grid: stay below it.
  auto j = parse_eps_grid("1:50:10");
  REQUIRE(j.size() == 2);
  CHECK(j[1] == doctest::Approx(10.0));

  CHECK_THROWS(parse_eps_grid("10"));
  CHECK_THROWS(parse_eps_grid("1:10:1"));     // factor must exceed 1
  CHECK_THROWS(parse_eps_grid("-1:10:10"));   // positive start
  CHECK_THROWS(parse_eps_grid("10:1:10"));    // stop below start
  CHECK_THROWS(parse_eps_grid("a:b:c"));
}

TEST_CASE("load_config round trip") {
  TempFile tmp("test_cli_config.json", kMinimalConfig);
  RunConfig c = load_config(tmp.path);
  CHECK(c.nx == 4);
  CHECK(c.ny == 5);
  CHECK(c.problem == "es");
  CHECK(c.pressure_bc == PressureBC::Neumann);
  CHECK(c.eps == 2.5);
  REQUIRE(c.eps_grid.size() == 3);
  CHECK(c.eps_grid[2] == doctest::Approx(1000.0));
  CHECK(c.expansion_order == 2);
  CHECK(c.out_dir == "out/test");
  CHECK_FALSE(c.has_exact_u());
  CHECK_FALSE(c.has_exact_p());
  CHECK(evaluate(c.u_b[0], 0.3, 0.0) == doctest::Approx(-0.21));
  validate_config(c);

  ProblemData d = problem_data(c);
  CHECK(d.pressure_bc == PressureBC::Neumann);
  // g_b_flux dotted with the normal.
  CHECK(d.pressure_flux_bc(Eigen::Vector2d(0.0, 0.5), Eigen::Vector2d(-1.0, 0.0)) ==
        doctest::Approx(-2.0));
  CHECK(d.velocity_bc(Eigen::Vector2d(0.3, 0.0)).x() == doctest::Approx(-0.21));
}

TEST_CASE("load_config rejects missing files and bad JSON") {
  CHECK_THROWS(load_config("no_such_file.json"));
  TempFile tmp("test_cli_bad.json", "{not json");
  CHECK_THROWS(load_config(tmp.path));
}

TEST_CASE("validate_config collects violations") {
  TempFile tmp("test_cli_config2.json", kMinimalConfig);
  RunConfig c = load_config(tmp.path);
  c.nx = 0;
  c.eps = -1.0;
  c.problem = "navier";
  try {
    validate_config(c);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("nx") != std::string::npos);
    CHECK(msg.find("eps") != std::string::npos);
    CHECK(msg.find("navier") != std::string::npos);
  }

  RunConfig m = load_config(tmp.path);
  m.pressure_bc = PressureBC::Mixed;  // mixed without Dirichlet sides
  CHECK_THROWS(validate_config(m));
}

TEST_CASE("exact-solution closures") {
  TempFile tmp("test_cli_config3.json", R"json({
    "mesh": {"nx": 2, "ny": 2, "rect": [0, 0, 1, 1]},
    "problem": {"type": "pp", "pressure_bc": "neumann"},
    "data": {
      "f": ["0", "0"], "div_f": "0",
      "u_b": ["x*(x-1)", "y*(y-1)"], "g_b_flux": ["2", "2"],
      "exact_u": ["x*(x-1)", "y*(y-1)"],
      "exact_grad_u": ["2*x-1", "0", "0", "2*y-1"],
      "exact_p": "2*x+2*y-2",
      "exact_grad_p": ["2", "2"]
    }
  })json");
  RunConfig c = load_config(tmp.path);
  REQUIRE(c.has_exact_u());
  REQUIRE(c.has_exact_p());
  CHECK(exact_velocity(c)(Eigen::Vector2d(0.5, 0.5)).x() == doctest::Approx(-0.25));
  CHECK(exact_velocity_jacobian(c)(Eigen::Vector2d(1.0, 0.0))(0, 0) == doctest::Approx(1.0));
  CHECK(exact_pressure(c)(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.0));
  CHECK(exact_pressure_gradient(c)(Eigen::Vector2d(0.0, 0.0)).y() == doctest::Approx(2.0));

  RunConfig bare = c;
  bare.exact_p = nullptr;
  CHECK_THROWS(exact_pressure(bare));
}

TEST_CASE("compile helpers treat null expressions as zero") {
  ScalarFn s = compile_scalar(Expr());
  CHECK(s(Eigen::Vector2d(0.3, 0.4)) == 0.0);
  VectorFn v = compile_vector(Expr(), Expr());
  CHECK(v(Eigen::Vector2d(0.3, 0.4)).norm() == 0.0);
  VectorFn w = compile_vector(parse("x"), parse("y"));
  CHECK(w(Eigen::Vector2d(0.25, 0.75)).x() == 0.25);
  CHECK(w(Eigen::Vector2d(0.25, 0.75)).y() == 0.75);
}
