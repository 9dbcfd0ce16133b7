#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "estokes/assembly.hpp"
#include "estokes/dofs.hpp"
#include "estokes/mesh.hpp"

namespace estokes {

struct ErrorReport {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
  double l2_mean_zero = 0.0;
};

using ScalarGradFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;
// Jacobian of a 2-vector function: row i is the gradient of component i.
using VectorJacFn = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

// Degree-6 quadrature norms of (field - reference). The gradient reference
// must be supplied for h1_semi; without it only l2 / l2_mean_zero are valid
// and requesting the full report throws.
ErrorReport error_norm(const Field& field, const ScalarFn& ref, const ScalarGradFn& ref_grad,
                       const Mesh& mesh);
ErrorReport error_norm(const Field& field, const VectorFn& ref, const VectorJacFn& ref_jac,
                       const Mesh& mesh);

// Norms of the difference of two fields on the same dofmap.
ErrorReport error_between(const Field& a, const Field& b, const Mesh& mesh);

// Norms of an FE field itself (reference zero).
ErrorReport field_norm(const Field& field, const Mesh& mesh);

// L2 distance after subtracting each scalar field's own mean.
double l2_mean_aligned(const Field& a, const Field& b, const Mesh& mesh);

enum class QSpace { Neumann, Mixed };

// Discrete Q* dual norm: ||grad w|| of the Riesz representative w in Q_h
// solving (grad w, grad psi) = <f, psi>. `functional` lives on the full P1
// space; for Mixed the Dirichlet rows are dropped, for Neumann the
// functional must annihilate constants.
double dual_norm_Q(const Eigen::VectorXd& functional, QSpace q, const DofMap& p1_space,
                   const Mesh& mesh);

}  // namespace estokes
