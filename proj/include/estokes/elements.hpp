#pragma once

#include <Eigen/Dense>

#include "estokes/mesh.hpp"

namespace estokes {

enum class Family { P1, P2 };

// Values and reference-coordinate gradients of all basis functions at one point.
struct BasisEval {
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients;
};

// P1: vertex Lagrange functions, local order (v0, v1, v2).
// P2: vertex + edge-midpoint Lagrange, local order (v0, v1, v2, m01, m12, m20).
// The reference triangle has vertices (0,0), (1,0), (0,1).
BasisEval eval_basis(Family family, const Eigen::Vector2d& point);

int basis_size(Family family);

struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;  // edge rules use column 0 only
  Eigen::VectorXd weights;
  int degree = 0;
};

// Exact for polynomials of total degree <= degree on the reference triangle.
// All weights positive. Supported degrees 1..6.
QuadratureRule triangle_rule(int degree);

// Gauss-Legendre on [0,1], exact for degree <= degree. Supported degrees 1..6.
QuadratureRule edge_rule(int degree);

// x = translation + jacobian * xi, mapping (0,0),(1,0),(0,1) to the cell vertices.
struct AffineMap {
  Eigen::Matrix2d jacobian;
  double determinant = 0.0;
  Eigen::Matrix2d inverse_transpose;
  Eigen::Vector2d translation;

  Eigen::Vector2d apply(const Eigen::Vector2d& ref) const { return translation + jacobian * ref; }
  Eigen::Vector2d pull_back(const Eigen::Vector2d& x) const {
    return jacobian.inverse() * (x - translation);
  }
};

AffineMap geometry_map(const Mesh& mesh, int cell);

}  // namespace estokes
