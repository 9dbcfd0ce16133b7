#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "estokes/elements.hpp"
#include "estokes/mesh.hpp"

using namespace estokes;

namespace {

// Exact integral of x^a y^b over the unit right triangle: a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

double apply_triangle(const QuadratureRule& rule, int a, int b) {
  double sum = 0.0;
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
    sum += rule.weights(q) * std::pow(rule.points(q, 0), a) * std::pow(rule.points(q, 1), b);
  }
  return sum;
}

}  // namespace

TEST_CASE("P1 at centroid") {
  BasisEval be = eval_basis(Family::P1, {1.0 / 3.0, 1.0 / 3.0});
  REQUIRE(be.values.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(be.values(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Lagrange property at nodes") {
  const Eigen::Vector2d p1_nodes[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int n = 0; n < 3; ++n) {
    BasisEval be = eval_basis(Family::P1, p1_nodes[n]);
    for (int i = 0; i < 3; ++i) CHECK(be.values(i) == doctest::Approx(i == n ? 1.0 : 0.0));
  }
  const Eigen::Vector2d p2_nodes[6] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0},
                                       {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
  for (int n = 0; n < 6; ++n) {
    BasisEval be = eval_basis(Family::P2, p2_nodes[n]);
    REQUIRE(be.values.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(be.values(i) == doctest::Approx(i == n ? 1.0 : 0.0));
  }
}

TEST_CASE("P2 at edge midpoint (1/2, 0)") {
  BasisEval be = eval_basis(Family::P2, {0.5, 0.0});
  CHECK(be.values(0) == doctest::Approx(0.0));  // vertex functions vanish
  CHECK(be.values(1) == doctest::Approx(0.0));
  CHECK(be.values(2) == doctest::Approx(0.0));
  CHECK(be.values(3) == doctest::Approx(1.0));  // own midpoint
  CHECK(be.values(4) == doctest::Approx(0.0));
  CHECK(be.values(5) == doctest::Approx(0.0));
}

TEST_CASE("partition of unity and gradient sum at random points") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = dist(rng), b = dist(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    for (Family fam : {Family::P1, Family::P2}) {
      BasisEval be = eval_basis(fam, {a, b});
      CHECK(be.values.sum() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(be.gradients.col(0).sum()) < 1e-13);
      CHECK(std::abs(be.gradients.col(1).sum()) < 1e-13);
    }
  }
}

TEST_CASE("points outside the reference triangle are rejected") {
  CHECK_THROWS(eval_basis(Family::P1, {0.7, 0.7}));
  CHECK_THROWS(eval_basis(Family::P2, {-0.1, 0.5}));
}

TEST_CASE("triangle rules integrate their monomials exactly") {
  for (int degree = 1; degree <= 6; ++degree) {
    QuadratureRule rule = triangle_rule(degree);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        CHECK(apply_triangle(rule, a, b) ==
              doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("degree-2 rule on x^2 gives 1/12") {
  CHECK(apply_triangle(triangle_rule(2), 2, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("edge rules integrate monomials exactly") {
  for (int degree = 1; degree <= 6; ++degree) {
    QuadratureRule rule = edge_rule(degree);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= degree; ++a) {
      double sum = 0.0;
      for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
        sum += rule.weights(q) * std::pow(rule.points(q, 0), a);
      }
      CHECK(sum == doctest::Approx(1.0 / (a + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("edge rule degree 3 on t^3 gives 1/4") {
  QuadratureRule rule = edge_rule(3);
  double sum = 0.0;
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
    sum += rule.weights(q) * std::pow(rule.points(q, 0), 3);
  }
  CHECK(sum == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("unsupported quadrature degrees are rejected") {
  CHECK_THROWS(triangle_rule(0));
  CHECK_THROWS(triangle_rule(7));
  CHECK_THROWS(edge_rule(0));
  CHECK_THROWS(edge_rule(7));
}

TEST_CASE("geometry map of reference-like cells") {
  // build_structured(1,1): cell 0 is (0,0),(1,0),(1,1).
  Mesh m = build_structured(1, 1, {0.0, 0.0, 1.0, 1.0});
  AffineMap map = geometry_map(m, 0);
  CHECK(map.determinant == doctest::Approx(1.0));
  CHECK((map.jacobian * map.inverse_transpose.transpose() - Eigen::Matrix2d::Identity()).norm() <
        1e-13);
  // Vertices map in order.
  const auto& tri = m.triangles[0];
  CHECK((map.apply({0.0, 0.0}) - m.vertices[static_cast<std::size_t>(tri[0])]).norm() < 1e-15);
  CHECK((map.apply({1.0, 0.0}) - m.vertices[static_cast<std::size_t>(tri[1])]).norm() < 1e-15);
  CHECK((map.apply({0.0, 1.0}) - m.vertices[static_cast<std::size_t>(tri[2])]).norm() < 1e-15);

  Mesh big = build_structured(1, 1, {0.0, 0.0, 2.0, 2.0});
  CHECK(geometry_map(big, 0).determinant == doctest::Approx(4.0));
}

TEST_CASE("determinant equals twice the triangle area") {
  Mesh m = build_structured(3, 2, {0.0, 0.0, 1.5, 1.0});
  for (std::size_t c = 0; c < m.triangles.size(); ++c) {
    AffineMap map = geometry_map(m, static_cast<int>(c));
    CHECK(map.determinant == doctest::Approx(2.0 * m.triangle_area(static_cast<int>(c))));
  }
}

TEST_CASE("pull_back inverts apply") {
  Mesh m = build_structured(2, 3, {0.5, -1.0, 2.5, 1.0});
  AffineMap map = geometry_map(m, 3);
  const Eigen::Vector2d ref(0.2, 0.3);
  CHECK((map.pull_back(map.apply(ref)) - ref).norm() < 1e-14);
}
