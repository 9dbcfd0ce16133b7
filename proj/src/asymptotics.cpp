#include "estokes/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace estokes {

namespace {

Field zero_field(const DofMap& space) {
  Field f;
  f.dofmap = &space;
  f.coeffs = Eigen::VectorXd::Zero(space.n_dofs);
  return f;
}

}  // namespace

std::vector<ExpansionTerm> expansion_terms(const Discretization& disc, const ProblemData& data,
                                           const Solution& pp, int k) {
  if (k < 1) throw std::invalid_argument("expansion_terms: k must be >= 1");
  std::vector<ExpansionTerm> terms;
  const Field* prev_velocity = &pp.velocity;

  for (int i = 1; i <= k; ++i) {
    // Pressure stage: (grad q, grad psi) = -(div v^(i-1), psi) on Q.
    const Eigen::VectorXd r = -(disc.div_u * prev_velocity->coeffs);

    ExpansionTerm term;
    term.order = i;
    term.pressure.dofmap = &disc.pressure_space;

    if (data.pressure_bc == PressureBC::Neumann) {
      const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
      if (std::abs(r.sum()) > 1e-9 * scale) {
        throw std::runtime_error("expansion_terms: constant-annihilation defect " +
                                 std::to_string(r.sum()) + " at order " + std::to_string(i));
      }
      const int n = disc.pressure_space.n_dofs;
      std::vector<Eigen::Triplet<double>> trips;
      for (int kk = 0; kk < disc.pressure_stiff.outerSize(); ++kk) {
        for (SparseMat::InnerIterator it(disc.pressure_stiff, kk); it; ++it) {
          trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
      }
      for (int j = 0; j < n; ++j) {
        trips.emplace_back(j, n, disc.pressure_integral(j));
        trips.emplace_back(n, j, disc.pressure_integral(j));
      }
      SparseMat sys(n + 1, n + 1);
      sys.setFromTriplets(trips.begin(), trips.end());
      Eigen::VectorXd rhs(n + 1);
      rhs.head(n) = r;
      rhs(n) = 0.0;
      term.pressure.coeffs = solve_sparse(sys, rhs).head(n);
    } else {
      const Field zero_bc = zero_field(disc.pressure_space);
      AssembledSystem reduced = apply_dirichlet(disc.pressure_stiff, r, disc.pressure_space, zero_bc);
      term.pressure.coeffs = reduced.reconstruct(solve_sparse(reduced.matrix, reduced.rhs));
    }

    // Velocity stage: (grad v, grad phi) = -(grad q, phi), zero trace.
    const Eigen::VectorXd rhs_v = -(disc.grad_p * term.pressure.coeffs);
    const Field zero_bc = zero_field(disc.velocity_space);
    AssembledSystem reduced = apply_dirichlet(disc.vel_laplacian, rhs_v, disc.velocity_space, zero_bc);
    term.velocity.dofmap = &disc.velocity_space;
    term.velocity.coeffs = reduced.reconstruct(solve_sparse(reduced.matrix, reduced.rhs));

    terms.push_back(std::move(term));
    prev_velocity = &terms.back().velocity;
  }
  return terms;
}

Field velocity_partial_sum(const Solution& pp, const std::vector<ExpansionTerm>& terms, int k,
                           double eps) {
  Field sum = pp.velocity;
  double scale = 1.0;
  for (int i = 1; i <= k; ++i) {
    scale /= eps;
    sum.coeffs += scale * terms[static_cast<std::size_t>(i - 1)].velocity.coeffs;
  }
  return sum;
}

Field pressure_partial_sum(const Solution& pp, const std::vector<ExpansionTerm>& terms, int k,
                           double eps) {
  Field sum = pp.pressure;
  double scale = 1.0;
  for (int i = 1; i <= k; ++i) {
    scale /= eps;
    sum.coeffs += scale * terms[static_cast<std::size_t>(i - 1)].pressure.coeffs;
  }
  return sum;
}

std::vector<RemainderRow> remainder_curve(const Discretization& disc, const ProblemData& data,
                                          const Solution& pp,
                                          const std::vector<ExpansionTerm>& terms,
                                          const std::vector<double>& eps_grid) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || (i > 0 && eps_grid[i] <= eps_grid[i - 1])) {
      throw std::invalid_argument("remainder_curve: eps grid must be positive and ascending");
    }
  }
  const int k = static_cast<int>(terms.size());
  const Mesh& mesh = *disc.mesh;
  std::vector<RemainderRow> rows;
  for (double eps : eps_grid) {
    ProblemData at_eps = data;
    at_eps.eps = eps;
    Solution es;
    try {
      es = solve_es(disc, at_eps);
    } catch (const std::exception& e) {
      throw std::runtime_error("remainder_curve: ES solve failed at eps=" + std::to_string(eps) +
                               ": " + e.what());
    }
    const Field su = velocity_partial_sum(pp, terms, k, eps);
    const Field sp = pressure_partial_sum(pp, terms, k, eps);
    RemainderRow row;
    row.eps = eps;
    row.rem_u_h1 = error_between(es.velocity, su, mesh).h1;
    row.rem_p_h1 = error_between(es.pressure, sp, mesh).h1;
    rows.push_back(row);
  }
  return rows;
}

Solution solve_scaled_term(const Discretization& disc, const ProblemData& data,
                           const Solution& pp, const std::vector<ExpansionTerm>& terms, int order,
                           double eps) {
  if (order < 1 || order > static_cast<int>(terms.size()) + 1) {
    throw std::invalid_argument("solve_scaled_term: order out of range");
  }
  const Field& prev = (order == 1) ? pp.velocity : terms[static_cast<std::size_t>(order - 2)].velocity;
  const Eigen::VectorXd g = -(disc.div_u * prev.coeffs);
  const Field zero_v = zero_field(disc.velocity_space);
  const Field zero_p = zero_field(disc.pressure_space);
  const Eigen::VectorXd zero_load = Eigen::VectorXd::Zero(disc.velocity_space.n_dofs);
  return solve_es_with(disc, eps, zero_load, g, zero_v, zero_p, data.pressure_bc);
}

}  // namespace estokes
