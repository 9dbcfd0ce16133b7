#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "estokes/asymptotics.hpp"

using namespace estokes;

namespace {

ProblemData reference_data() {
  ProblemData d;
  d.body_force = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero(); };
  d.div_f = [](const Eigen::Vector2d&) { return 0.0; };
  d.velocity_bc = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(x.x() * (x.x() - 1.0), x.y() * (x.y() - 1.0));
  };
  d.pressure_flux_bc = [](const Eigen::Vector2d&, const Eigen::Vector2d& nu) {
    return 2.0 * nu.x() + 2.0 * nu.y();
  };
  d.pressure_bc = PressureBC::Neumann;
  return d;
}

}  // namespace

TEST_CASE("divergence-free base flow has vanishing expansion terms") {
  Mesh m = build_structured(8, 8, {0.0, 0.0, 1.0, 1.0});
  ProblemData d = reference_data();
  d.velocity_bc = [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y(), x.x()); };
  d.pressure_flux_bc = [](const Eigen::Vector2d&, const Eigen::Vector2d&) { return 0.0; };
  Discretization disc(m, d);
  Solution pp = solve_pp(disc, d);
  auto terms = expansion_terms(disc, d, pp, 2);
  REQUIRE(terms.size() == 2);
  for (const auto& t : terms) {
    CHECK(field_norm(t.velocity, m).h1 < 1e-10);
    CHECK(field_norm(t.pressure, m).h1 < 1e-10);
  }
}

TEST_CASE("first-order pressure term matches its closed form") {
  // For the reference data, div u_PP = 2x + 2y - 2 and the first pressure
  // term solves the homogeneous Neumann problem with that source, giving
  // q1 = (x^3 + y^3)/3 - (x^2 + y^2)/2 + 1/6 (mean zero). The P1
  // approximation converges at second order, which the 32 -> 64 ratio checks.
  ProblemData d = reference_data();
  const auto exact = [](const Eigen::Vector2d& x) {
    return (x.x() * x.x() * x.x() + x.y() * x.y() * x.y()) / 3.0 -
           (x.x() * x.x() + x.y() * x.y()) / 2.0 + 1.0 / 6.0;
  };
  const auto exact_grad = [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(x.x() * x.x() - x.x(), x.y() * x.y() - x.y());
  };
  double errs[2];
  int idx = 0;
  for (int n : {32, 64}) {
    Mesh m = build_structured(n, n, {0.0, 0.0, 1.0, 1.0});
    Discretization disc(m, d);
    Solution pp = solve_pp(disc, d);
    auto terms = expansion_terms(disc, d, pp, 1);
    errs[idx++] = error_norm(terms[0].pressure, exact, exact_grad, m).l2_mean_zero;
  }
  CHECK(errs[0] < 1e-3);
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("second-order terms are nonzero and solves are deterministic") {
  Mesh m = build_structured(8, 8, {0.0, 0.0, 1.0, 1.0});
  ProblemData d = reference_data();
  Discretization disc(m, d);
  Solution pp = solve_pp(disc, d);
  auto a = expansion_terms(disc, d, pp, 2);
  auto b = expansion_terms(disc, d, pp, 2);
  CHECK(field_norm(a[1].velocity, m).h1 > 1e-6);
  CHECK(field_norm(a[1].pressure, m).h1 > 1e-6);
  for (int i = 0; i < 2; ++i) {
    CHECK((a[i].velocity.coeffs - b[i].velocity.coeffs).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a[i].pressure.coeffs - b[i].pressure.coeffs).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("partial sums reduce to the PP solution at order zero") {
  Mesh m = build_structured(4, 4, {0.0, 0.0, 1.0, 1.0});
  ProblemData d = reference_data();
  Discretization disc(m, d);
  Solution pp = solve_pp(disc, d);
  auto terms = expansion_terms(disc, d, pp, 1);
  Field s0 = velocity_partial_sum(pp, terms, 0, 17.0);
  CHECK((s0.coeffs - pp.velocity.coeffs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("telescoping identity between the two term routes") {
  // Route one: v1 = eps (u_eps - u_PP), v2 = eps (v1 - v^(1)).
  // Route two: the scaled difference solves of the same orders.
  Mesh m = build_structured(16, 16, {0.0, 0.0, 1.0, 1.0});
  ProblemData d = reference_data();
  Discretization disc(m, d);
  Solution pp = solve_pp(disc, d);
  auto terms = expansion_terms(disc, d, pp, 2);

  for (double eps : {10.0, 100.0}) {
    ProblemData at_eps = d;
    at_eps.eps = eps;
    Solution es = solve_es(disc, at_eps);

    Field v1 = es.velocity;
    v1.coeffs = eps * (es.velocity.coeffs - pp.velocity.coeffs);
    Field p1 = es.pressure;
    p1.coeffs = eps * (es.pressure.coeffs - pp.pressure.coeffs);

    Solution r1 = solve_scaled_term(disc, d, pp, terms, 1, eps);
    CHECK(error_between(v1, r1.velocity, m).h1 < 1e-8);
    CHECK(error_between(p1, r1.pressure, m).l2_mean_zero < 1e-8);

    Field v2 = v1;
    v2.coeffs = eps * (v1.coeffs - terms[0].velocity.coeffs);
    Solution r2 = solve_scaled_term(disc, d, pp, terms, 2, eps);
    CHECK(error_between(v2, r2.velocity, m).h1 < 1e-8);
  }
}

TEST_CASE("remainder curve decays at the expected rate") {
  Mesh m = build_structured(16, 16, {0.0, 0.0, 1.0, 1.0});
  ProblemData d = reference_data();
  Discretization disc(m, d);
  Solution pp = solve_pp(disc, d);

  // k = 0 (empty terms): Theorem-3.2-type c/eps decay of u_eps - u_PP.
  auto rows0 = remainder_curve(disc, d, pp, {}, {10.0, 100.0});
  CHECK(rows0[0].rem_u_h1 > rows0[1].rem_u_h1);
  CHECK(rows0[1].rem_u_h1 / rows0[0].rem_u_h1 == doctest::Approx(0.1).epsilon(0.3));

  // k = 1: c/eps^2.
  auto terms = expansion_terms(disc, d, pp, 1);
  auto rows1 = remainder_curve(disc, d, pp, terms, {10.0, 100.0});
  CHECK(rows1[1].rem_u_h1 / rows1[0].rem_u_h1 == doctest::Approx(0.01).epsilon(0.3));
  CHECK(rows1[1].rem_p_h1 / rows1[0].rem_p_h1 == doctest::Approx(0.01).epsilon(0.3));
}

TEST_CASE("input validation") {
  Mesh m = build_structured(4, 4, {0.0, 0.0, 1.0, 1.0});
  ProblemData d = reference_data();
  Discretization disc(m, d);
  Solution pp = solve_pp(disc, d);
  CHECK_THROWS(expansion_terms(disc, d, pp, 0));
  auto terms = expansion_terms(disc, d, pp, 1);
  CHECK_THROWS(remainder_curve(disc, d, pp, terms, {100.0, 10.0}));
  CHECK_THROWS(remainder_curve(disc, d, pp, terms, {-1.0, 10.0}));
  CHECK_THROWS(solve_scaled_term(disc, d, pp, terms, 0, 10.0));
  CHECK_THROWS(solve_scaled_term(disc, d, pp, terms, 5, 10.0));
}
