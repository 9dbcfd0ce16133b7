#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace estokes {

// Direct sparse LU with partial pivoting. Throws on structurally or
// numerically singular input, naming the zero-pivot row when known.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& matrix,
                             const Eigen::VectorXd& rhs);

// Relative residual ||Ax - b|| / ||b|| (or ||Ax|| when b = 0).
double relative_residual(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs);

}  // namespace estokes
