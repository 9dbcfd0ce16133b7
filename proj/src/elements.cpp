#include "estokes/elements.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace estokes {

int basis_size(Family family) { return family == Family::P1 ? 3 : 6; }

BasisEval eval_basis(Family family, const Eigen::Vector2d& point) {
  const double x = point.x();
  const double y = point.y();
  const double tol = 1e-12;
  if (x < -tol || y < -tol || x + y > 1.0 + tol) {
    throw std::invalid_argument("eval_basis: point outside the reference triangle");
  }
  const double l0 = 1.0 - x - y;
  const double l1 = x;
  const double l2 = y;

  BasisEval out;
  if (family == Family::P1) {
    out.values.resize(3);
    out.gradients.resize(3, 2);
    out.values << l0, l1, l2;
    out.gradients << -1, -1, 1, 0, 0, 1;
    return out;
  }

  out.values.resize(6);
  out.gradients.resize(6, 2);
  out.values << l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
      4 * l0 * l1, 4 * l1 * l2, 4 * l2 * l0;
  // d(lambda)/d(x,y): l0 -> (-1,-1), l1 -> (1,0), l2 -> (0,1)
  out.gradients.row(0) << -(4 * l0 - 1), -(4 * l0 - 1);
  out.gradients.row(1) << 4 * l1 - 1, 0;
  out.gradients.row(2) << 0, 4 * l2 - 1;
  out.gradients.row(3) << 4 * (l0 - l1), -4 * l1;
  out.gradients.row(4) << 4 * l2, 4 * l1;
  out.gradients.row(5) << -4 * l2, 4 * (l0 - l2);
  return out;
}

namespace {

struct TriPoint {
  double x, y, w;  // w in area coordinates, sums to 1 over a rule
};

void add_group3(std::vector<TriPoint>& pts, double a, double w) {
  pts.push_back({a, a, w});
  pts.push_back({1 - 2 * a, a, w});
  pts.push_back({a, 1 - 2 * a, w});
}

void add_group6(std::vector<TriPoint>& pts, double a, double b, double w) {
  const double c = 1 - a - b;
  pts.push_back({b, c, w});
  pts.push_back({c, b, w});
  pts.push_back({a, c, w});
  pts.push_back({c, a, w});
  pts.push_back({a, b, w});
  pts.push_back({b, a, w});
}

QuadratureRule pack(const std::vector<TriPoint>& pts, int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
  rule.weights.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.points(static_cast<Eigen::Index>(i), 0) = pts[i].x;
    rule.points(static_cast<Eigen::Index>(i), 1) = pts[i].y;
    rule.weights(static_cast<Eigen::Index>(i)) = 0.5 * pts[i].w;  // reference area 1/2
  }
  return rule;
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
  if (degree < 1 || degree > 6) {
    throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  std::vector<TriPoint> pts;
  switch (degree) {
    case 1:
      pts.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0});
      break;
    case 2:
      add_group3(pts, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      // Dunavant degree-4 rule; the classical degree-3 rule carries a
      // negative centroid weight, so degree 3 is served by this one.
      add_group3(pts, 0.445948490915965, 0.223381589678011);
      add_group3(pts, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0.225});
      add_group3(pts, 0.470142064105115, 0.132394152788506);
      add_group3(pts, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      add_group3(pts, 0.249286745170910, 0.116786275726379);
      add_group3(pts, 0.063089014491502, 0.050844906370207);
      add_group6(pts, 0.053145049844816, 0.310352451033785, 0.082851075618374);
      break;
  }
  return pack(pts, degree);
}

QuadratureRule edge_rule(int degree) {
  if (degree < 1 || degree > 6) {
    throw std::invalid_argument("edge_rule: unsupported degree " + std::to_string(degree));
  }
  // Gauss-Legendre nodes/weights on [-1,1], mapped to [0,1].
  std::vector<double> nodes, weights;
  if (degree <= 1) {
    nodes = {0.0};
    weights = {2.0};
  } else if (degree <= 3) {
    const double a = 1.0 / std::sqrt(3.0);
    nodes = {-a, a};
    weights = {1.0, 1.0};
  } else if (degree <= 5) {
    const double a = std::sqrt(3.0 / 5.0);
    nodes = {-a, 0.0, a};
    weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  } else {
    nodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    weights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  }
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.resize(static_cast<Eigen::Index>(nodes.size()), 2);
  rule.points.setZero();
  rule.weights.resize(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rule.points(static_cast<Eigen::Index>(i), 0) = 0.5 * (1.0 + nodes[i]);
    rule.weights(static_cast<Eigen::Index>(i)) = 0.5 * weights[i];
  }
  return rule;
}

AffineMap geometry_map(const Mesh& mesh, int cell) {
  const auto& t = mesh.triangles.at(static_cast<std::size_t>(cell));
  const Eigen::Vector2d& a = mesh.vertices[static_cast<std::size_t>(t[0])];
  const Eigen::Vector2d& b = mesh.vertices[static_cast<std::size_t>(t[1])];
  const Eigen::Vector2d& c = mesh.vertices[static_cast<std::size_t>(t[2])];
  AffineMap map;
  map.translation = a;
  map.jacobian.col(0) = b - a;
  map.jacobian.col(1) = c - a;
  map.determinant = map.jacobian.determinant();
  map.inverse_transpose = map.jacobian.inverse().transpose();
  return map;
}

}  // namespace estokes
