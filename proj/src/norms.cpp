#include "estokes/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "estokes/solve.hpp"

namespace estokes {

namespace {

constexpr int kErrorQuadDegree = 6;

struct Accum {
  double sq = 0.0;        // integral of |diff|^2
  double grad_sq = 0.0;   // integral of |grad diff|^2
  double mean[2] = {0.0, 0.0};  // integral of diff per component
  double sq_shift = 0.0;  // integral of |diff - mean(diff)|^2 (second pass)
};

ErrorReport finish(const Accum& acc) {
  ErrorReport r;
  r.l2 = std::sqrt(std::max(0.0, acc.sq));
  r.h1_semi = std::sqrt(std::max(0.0, acc.grad_sq));
  r.h1 = std::sqrt(std::max(0.0, acc.sq + acc.grad_sq));
  r.l2_mean_zero = std::sqrt(std::max(0.0, acc.sq_shift));
  return r;
}

// Walks cells with the degree-6 rule, calling diff(x, cell-local FE value and
// gradient already accumulated) per quadrature point.
template <typename PointFn>
Accum integrate(const Field& field, const Mesh& mesh, PointFn&& diff_at,
                const double* shift = nullptr) {
  const DofMap& dm = *field.dofmap;
  const QuadratureRule rule = triangle_rule(kErrorQuadDegree);
  std::vector<BasisEval> tab;
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
    tab.push_back(eval_basis(dm.family(), rule.points.row(q).transpose()));
  }
  const int nb = basis_size(dm.family());
  Accum acc;
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const AffineMap map = geometry_map(mesh, static_cast<int>(c));
    const std::vector<int>& dofs = dm.cell_dofs[c];
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights(q) * map.determinant;
      const BasisEval& be = tab[static_cast<std::size_t>(q)];
      Eigen::Matrix<double, Eigen::Dynamic, 2> pg = be.gradients * map.inverse_transpose.transpose();
      const Eigen::Vector2d x = map.apply(rule.points.row(q).transpose());
      double val[2] = {0.0, 0.0};
      Eigen::Vector2d grad[2] = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
      for (int i = 0; i < nb; ++i) {
        for (int comp = 0; comp < dm.components; ++comp) {
          const double coeff = field.coeffs(dofs[static_cast<std::size_t>(dm.components * i + comp)]);
          val[comp] += coeff * be.values(i);
          grad[comp] += coeff * pg.row(i).transpose();
        }
      }
      diff_at(x, val, grad);
      for (int comp = 0; comp < dm.components; ++comp) {
        acc.sq += w * val[comp] * val[comp];
        acc.grad_sq += w * grad[comp].squaredNorm();
        acc.mean[comp] += w * val[comp];
        if (shift) {
          const double centered = val[comp] - shift[comp];
          acc.sq_shift += w * centered * centered;
        }
      }
    }
  }
  return acc;
}

// Two-pass evaluation: the second pass subtracts each component's mean before
// squaring, which avoids the catastrophic cancellation of sq - mean^2/area
// when the difference is (nearly) constant.
template <typename PointFn>
Accum integrate_aligned(const Field& field, const Mesh& mesh, PointFn&& diff_at) {
  Accum acc = integrate(field, mesh, diff_at);
  const double area = mesh.area();
  const double shift[2] = {acc.mean[0] / area, acc.mean[1] / area};
  acc.sq_shift = integrate(field, mesh, diff_at, shift).sq_shift;
  return acc;
}

}  // namespace

ErrorReport error_norm(const Field& field, const ScalarFn& ref, const ScalarGradFn& ref_grad,
                       const Mesh& mesh) {
  if (field.dofmap->components != 1) {
    throw std::invalid_argument("error_norm: scalar reference for a vector field");
  }
  if (!ref_grad) {
    throw std::invalid_argument("error_norm: analytic gradient required for H1 norms");
  }
  Accum acc = integrate_aligned(
      field, mesh, [&](const Eigen::Vector2d& x, double* val, Eigen::Vector2d* grad) {
        val[0] -= ref(x);
        grad[0] -= ref_grad(x);
      });
  return finish(acc);
}

ErrorReport error_norm(const Field& field, const VectorFn& ref, const VectorJacFn& ref_jac,
                       const Mesh& mesh) {
  if (field.dofmap->components != 2) {
    throw std::invalid_argument("error_norm: vector reference for a scalar field");
  }
  if (!ref_jac) {
    throw std::invalid_argument("error_norm: analytic jacobian required for H1 norms");
  }
  Accum acc = integrate_aligned(
      field, mesh, [&](const Eigen::Vector2d& x, double* val, Eigen::Vector2d* grad) {
        const Eigen::Vector2d rv = ref(x);
        const Eigen::Matrix2d rj = ref_jac(x);
        val[0] -= rv.x();
        val[1] -= rv.y();
        grad[0] -= rj.row(0).transpose();
        grad[1] -= rj.row(1).transpose();
      });
  return finish(acc);
}

ErrorReport field_norm(const Field& field, const Mesh& mesh) {
  Accum acc =
      integrate_aligned(field, mesh, [](const Eigen::Vector2d&, double*, Eigen::Vector2d*) {});
  return finish(acc);
}

ErrorReport error_between(const Field& a, const Field& b, const Mesh& mesh) {
  if (a.dofmap != b.dofmap) {
    throw std::invalid_argument("error_between: fields must share a dofmap");
  }
  Field diff = a;
  diff.coeffs -= b.coeffs;
  return field_norm(diff, mesh);
}

double l2_mean_aligned(const Field& a, const Field& b, const Mesh& mesh) {
  return error_between(a, b, mesh).l2_mean_zero;
}

double dual_norm_Q(const Eigen::VectorXd& functional, QSpace q, const DofMap& p1_space,
                   const Mesh& mesh) {
  if (p1_space.kind != SpaceKind::P1Scalar || functional.size() != p1_space.n_dofs) {
    throw std::invalid_argument("dual_norm_Q: functional must live on the P1 space");
  }
  const SparseMat stiffness = assemble_matrix(mesh, p1_space, p1_space, Form::LaplacianScalar);

  if (q == QSpace::Neumann) {
    const double scale = std::max(1.0, functional.cwiseAbs().maxCoeff());
    const double defect = std::abs(functional.sum());
    if (defect > 1e-10 * scale) {
      throw std::invalid_argument("dual_norm_Q: functional does not annihilate constants (defect " +
                                  std::to_string(defect) + ")");
    }
    const SparseMat mass = assemble_matrix(mesh, p1_space, p1_space, Form::Mass);
    const Eigen::VectorXd m = mass * Eigen::VectorXd::Ones(p1_space.n_dofs);
    const int n = p1_space.n_dofs;
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < stiffness.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(stiffness, k); it; ++it) {
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      }
    }
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, n, m(i));
      trips.emplace_back(n, i, m(i));
    }
    SparseMat sys(n + 1, n + 1);
    sys.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = functional;
    rhs(n) = 0.0;
    Eigen::VectorXd sol = solve_sparse(sys, rhs);
    return std::sqrt(std::max(0.0, functional.dot(sol.head(n))));
  }

  // Mixed: drop the Dirichlet rows of the P1 space.
  std::vector<int> free;
  for (int d = 0; d < p1_space.n_dofs; ++d) {
    if (!p1_space.dof_dirichlet(d)) free.push_back(d);
  }
  if (free.size() == static_cast<std::size_t>(p1_space.n_dofs)) {
    throw std::invalid_argument("dual_norm_Q: mixed regime requires Dirichlet pressure dofs");
  }
  std::vector<int> full_to_free(static_cast<std::size_t>(p1_space.n_dofs), -1);
  for (std::size_t i = 0; i < free.size(); ++i) full_to_free[static_cast<std::size_t>(free[i])] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < stiffness.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(stiffness, k); it; ++it) {
      int r = full_to_free[static_cast<std::size_t>(it.row())];
      int c = full_to_free[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMat sys(static_cast<int>(free.size()), static_cast<int>(free.size()));
  sys.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = functional(free[i]);
  Eigen::VectorXd w = solve_sparse(sys, rhs);
  return std::sqrt(std::max(0.0, rhs.dot(w)));
}

}  // namespace estokes
