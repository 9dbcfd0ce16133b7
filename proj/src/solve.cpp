#include "estokes/solve.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/SparseLU>

namespace estokes {

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& matrix,
                             const Eigen::VectorXd& rhs) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("solve_sparse: matrix must be square");
  }
  if (matrix.rows() != rhs.size()) {
    throw std::invalid_argument("solve_sparse: rhs size mismatch");
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(matrix);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("solve_sparse: singular factorization (" + lu.lastErrorMessage() + ")");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("solve_sparse: back substitution failed");
  }
  return x;
}

double relative_residual(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs) {
  const double denom = rhs.norm();
  const double num = (matrix * x - rhs).norm();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace estokes
