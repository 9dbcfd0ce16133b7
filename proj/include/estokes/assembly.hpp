#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "estokes/dofs.hpp"
#include "estokes/mesh.hpp"

namespace estokes {

using SparseMat = Eigen::SparseMatrix<double>;

enum class Form {
  LaplacianVector,  // grad u : grad phi   (P2Vector2 x P2Vector2)
  LaplacianScalar,  // grad p . grad psi   (scalar x scalar)
  GradPDotV,        // grad p . phi        (rows P2Vector2, cols scalar)
  DivUTimesQ,       // (div u) psi         (rows scalar, cols P2Vector2)
  Mass,             // u v                 (matching kinds)
};

// Entry (i,j) is the integral of the form over Omega for basis pair (row i,
// col j), assembled cell by cell in fixed order with a degree-4 rule.
SparseMat assemble_matrix(const Mesh& mesh, const DofMap& row_space, const DofMap& col_space,
                          Form form, int quad_degree = 4);

// Normal-dependent boundary data such as g_b = (2,2) . nu.
using BoundaryFn = std::function<double(const Eigen::Vector2d& x, const Eigen::Vector2d& nu)>;

Eigen::VectorXd assemble_body_force(const Mesh& mesh, const DofMap& space, const VectorFn& f,
                                    int quad_degree = 4);
Eigen::VectorXd assemble_div_f_volume(const Mesh& mesh, const DofMap& space, const ScalarFn& div_f,
                                      int quad_degree = 4);
// Edge integral of g_b against scalar traces over the boundary edges whose
// side tag lies in `sides` (degree-3 Gauss by default).
Eigen::VectorXd assemble_neumann_boundary(const Mesh& mesh, const DofMap& space,
                                          const BoundaryFn& g_b, const SideSet& sides,
                                          int quad_degree = 3);

struct AssembledSystem {
  SparseMat matrix;                // free x free
  Eigen::VectorXd rhs;             // on free dofs
  std::vector<int> free_to_full;   // free index -> full-space dof
  std::vector<int> full_to_free;   // -1 at Dirichlet dofs
  Eigen::VectorXd lifting;         // full-space; imposed values at Dirichlet dofs, 0 elsewhere

  // Free-dof solution -> full-space coefficients (adds the lifting back).
  Eigen::VectorXd reconstruct(const Eigen::VectorXd& free_solution) const;
};

// Row/column elimination with lifting: Dirichlet dofs of `space` leave the
// unknown set and their imposed values feed the right-hand side.
AssembledSystem apply_dirichlet(const SparseMat& matrix, const Eigen::VectorXd& rhs,
                                const DofMap& space, const Field& boundary_values);

void write_matrix_market(const SparseMat& m, const std::string& path);

}  // namespace estokes
