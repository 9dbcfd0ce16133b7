#include "estokes/assembly.hpp"

#include <fstream>
#include <stdexcept>

namespace estokes {

namespace {

void check_spaces(Form form, const DofMap& row, const DofMap& col) {
  auto fail = [&](const char* need) {
    throw std::invalid_argument(std::string("assemble_matrix: space/form mismatch, need ") + need);
  };
  switch (form) {
    case Form::LaplacianVector:
      if (row.kind != SpaceKind::P2Vector2 || col.kind != SpaceKind::P2Vector2)
        fail("P2Vector2 x P2Vector2");
      break;
    case Form::LaplacianScalar:
      if (row.components != 1 || col.components != 1 || row.kind != col.kind)
        fail("matching scalar spaces");
      break;
    case Form::GradPDotV:
      if (row.kind != SpaceKind::P2Vector2 || col.components != 1)
        fail("P2Vector2 rows, scalar cols");
      break;
    case Form::DivUTimesQ:
      if (row.components != 1 || col.kind != SpaceKind::P2Vector2)
        fail("scalar rows, P2Vector2 cols");
      break;
    case Form::Mass:
      if (row.kind != col.kind) fail("matching spaces");
      break;
  }
}

struct CellBasis {
  // Per quadrature point: reference values and gradients.
  std::vector<BasisEval> at;
};

CellBasis tabulate(Family family, const QuadratureRule& rule) {
  CellBasis cb;
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
    cb.at.push_back(eval_basis(family, rule.points.row(q).transpose()));
  }
  return cb;
}

}  // namespace

SparseMat assemble_matrix(const Mesh& mesh, const DofMap& row_space, const DofMap& col_space,
                          Form form, int quad_degree) {
  check_spaces(form, row_space, col_space);
  const QuadratureRule rule = triangle_rule(quad_degree);
  const CellBasis row_tab = tabulate(row_space.family(), rule);
  const CellBasis col_tab = tabulate(col_space.family(), rule);
  const int nrb = basis_size(row_space.family());
  const int ncb = basis_size(col_space.family());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangles.size() * static_cast<std::size_t>(nrb * ncb * 4));

  Eigen::MatrixXd local(row_space.components * nrb, col_space.components * ncb);
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const AffineMap map = geometry_map(mesh, static_cast<int>(c));
    local.setZero();
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights(q) * map.determinant;
      const BasisEval& rb = row_tab.at[static_cast<std::size_t>(q)];
      const BasisEval& col_b = col_tab.at[static_cast<std::size_t>(q)];
      // Physical gradients.
      Eigen::Matrix<double, Eigen::Dynamic, 2> rg = rb.gradients * map.inverse_transpose.transpose();
      Eigen::Matrix<double, Eigen::Dynamic, 2> cg = col_b.gradients * map.inverse_transpose.transpose();
      switch (form) {
        case Form::LaplacianVector:
          for (int i = 0; i < nrb; ++i)
            for (int j = 0; j < ncb; ++j) {
              const double v = w * rg.row(i).dot(cg.row(j));
              local(2 * i, 2 * j) += v;
              local(2 * i + 1, 2 * j + 1) += v;
            }
          break;
        case Form::LaplacianScalar:
          for (int i = 0; i < nrb; ++i)
            for (int j = 0; j < ncb; ++j) local(i, j) += w * rg.row(i).dot(cg.row(j));
          break;
        case Form::GradPDotV:
          for (int i = 0; i < nrb; ++i)
            for (int j = 0; j < ncb; ++j)
              for (int comp = 0; comp < 2; ++comp)
                local(2 * i + comp, j) += w * rb.values(i) * cg(j, comp);
          break;
        case Form::DivUTimesQ:
          for (int i = 0; i < nrb; ++i)
            for (int j = 0; j < ncb; ++j)
              for (int comp = 0; comp < 2; ++comp)
                local(i, 2 * j + comp) += w * rb.values(i) * cg(j, comp);
          break;
        case Form::Mass:
          for (int i = 0; i < nrb; ++i)
            for (int j = 0; j < ncb; ++j) {
              const double v = w * rb.values(i) * col_b.values(j);
              for (int comp = 0; comp < row_space.components; ++comp)
                local(row_space.components * i + comp, col_space.components * j + comp) += v;
            }
          break;
      }
    }
    const std::vector<int>& rdofs = row_space.cell_dofs[c];
    const std::vector<int>& cdofs = col_space.cell_dofs[c];
    for (std::size_t i = 0; i < rdofs.size(); ++i)
      for (std::size_t j = 0; j < cdofs.size(); ++j)
        triplets.emplace_back(rdofs[i], cdofs[j],
                              local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  SparseMat m(row_space.n_dofs, col_space.n_dofs);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXd assemble_body_force(const Mesh& mesh, const DofMap& space, const VectorFn& f,
                                    int quad_degree) {
  if (space.components != 2) {
    throw std::invalid_argument("assemble_body_force: requires a vector space");
  }
  const QuadratureRule rule = triangle_rule(quad_degree);
  const CellBasis tab = tabulate(space.family(), rule);
  const int nb = basis_size(space.family());
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_dofs);
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const AffineMap map = geometry_map(mesh, static_cast<int>(c));
    const std::vector<int>& dofs = space.cell_dofs[c];
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights(q) * map.determinant;
      const Eigen::Vector2d x = map.apply(rule.points.row(q).transpose());
      const Eigen::Vector2d fv = f(x);
      const BasisEval& be = tab.at[static_cast<std::size_t>(q)];
      for (int i = 0; i < nb; ++i) {
        load(dofs[static_cast<std::size_t>(2 * i)]) += w * be.values(i) * fv.x();
        load(dofs[static_cast<std::size_t>(2 * i + 1)]) += w * be.values(i) * fv.y();
      }
    }
  }
  return load;
}

Eigen::VectorXd assemble_div_f_volume(const Mesh& mesh, const DofMap& space, const ScalarFn& div_f,
                                      int quad_degree) {
  if (space.components != 1) {
    throw std::invalid_argument("assemble_div_f_volume: requires a scalar space");
  }
  if (!div_f) {
    throw std::invalid_argument("assemble_div_f_volume: div F not supplied");
  }
  const QuadratureRule rule = triangle_rule(quad_degree);
  const CellBasis tab = tabulate(space.family(), rule);
  const int nb = basis_size(space.family());
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_dofs);
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const AffineMap map = geometry_map(mesh, static_cast<int>(c));
    const std::vector<int>& dofs = space.cell_dofs[c];
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights(q) * map.determinant;
      const double fv = div_f(map.apply(rule.points.row(q).transpose()));
      const BasisEval& be = tab.at[static_cast<std::size_t>(q)];
      for (int i = 0; i < nb; ++i) load(dofs[static_cast<std::size_t>(i)]) += w * be.values(i) * fv;
    }
  }
  return load;
}

Eigen::VectorXd assemble_neumann_boundary(const Mesh& mesh, const DofMap& space,
                                          const BoundaryFn& g_b, const SideSet& sides,
                                          int quad_degree) {
  if (space.components != 1) {
    throw std::invalid_argument("assemble_neumann_boundary: requires a scalar space");
  }
  const QuadratureRule rule = edge_rule(quad_degree);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_dofs);
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const BoundaryEdge& be : mesh.boundary_edges) {
    if (!sides.contains(be.side)) continue;
    const Edge& edge = mesh.edges[static_cast<std::size_t>(be.edge)];
    const Eigen::Vector2d a = mesh.vertices[static_cast<std::size_t>(edge.vertices[0])];
    const Eigen::Vector2d b = mesh.vertices[static_cast<std::size_t>(edge.vertices[1])];
    const double len = (b - a).norm();
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const double t = rule.points(q, 0);
      const double w = rule.weights(q) * len;
      const Eigen::Vector2d x = a + t * (b - a);
      const double g = g_b(x, be.normal);
      // Scalar trace on the edge: endpoints carry 1-t and t; a P2 midpoint
      // carries 4t(1-t) with endpoint weights (1-t)(1-2t), t(2t-1).
      if (space.kind == SpaceKind::P1Scalar) {
        load(edge.vertices[0]) += w * g * (1.0 - t);
        load(edge.vertices[1]) += w * g * t;
      } else {
        load(edge.vertices[0]) += w * g * (1.0 - t) * (1.0 - 2.0 * t);
        load(edge.vertices[1]) += w * g * t * (2.0 * t - 1.0);
        load(nv + be.edge) += w * g * 4.0 * t * (1.0 - t);
      }
    }
  }
  return load;
}

Eigen::VectorXd AssembledSystem::reconstruct(const Eigen::VectorXd& free_solution) const {
  Eigen::VectorXd full = lifting;
  for (std::size_t i = 0; i < free_to_full.size(); ++i) {
    full(free_to_full[i]) = free_solution(static_cast<Eigen::Index>(i));
  }
  return full;
}

AssembledSystem apply_dirichlet(const SparseMat& matrix, const Eigen::VectorXd& rhs,
                                const DofMap& space, const Field& boundary_values) {
  AssembledSystem sys;
  sys.full_to_free.assign(static_cast<std::size_t>(space.n_dofs), -1);
  sys.lifting = Eigen::VectorXd::Zero(space.n_dofs);
  for (int d = 0; d < space.n_dofs; ++d) {
    if (space.dof_dirichlet(d)) {
      sys.lifting(d) = boundary_values.coeffs(d);
    } else {
      sys.full_to_free[static_cast<std::size_t>(d)] = static_cast<int>(sys.free_to_full.size());
      sys.free_to_full.push_back(d);
    }
  }
  const int nf = static_cast<int>(sys.free_to_full.size());
  Eigen::VectorXd shifted = rhs - matrix * sys.lifting;
  sys.rhs.resize(nf);
  for (int i = 0; i < nf; ++i) sys.rhs(i) = shifted(sys.free_to_full[static_cast<std::size_t>(i)]);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(matrix.nonZeros()));
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(matrix, k); it; ++it) {
      int r = sys.full_to_free[static_cast<std::size_t>(it.row())];
      int c = sys.full_to_free[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  sys.matrix.resize(nf, nf);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

void write_matrix_market(const SparseMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
    }
  }
}

}  // namespace estokes
