#pragma once

#include <vector>

#include "estokes/systems.hpp"

namespace estokes {

// One term of the 1/eps expansion around the pressure-Poisson solution.
// velocity has zero trace; pressure lives in the regime's Q.
struct ExpansionTerm {
  int order = 0;
  Field velocity;
  Field pressure;
};

// Solves the two-stage recursion seeded by v^(0) = u_PP: pressure from a
// Poisson problem driven by -div of the previous velocity, then velocity
// from a homogeneous vector Laplace problem driven by the pressure gradient.
std::vector<ExpansionTerm> expansion_terms(const Discretization& disc, const ProblemData& data,
                                           const Solution& pp, int k);

struct RemainderRow {
  double eps = 0.0;
  double rem_u_h1 = 0.0;
  double rem_p_h1 = 0.0;
};

// H1 norms of u_eps minus the order-k partial sum (and same for pressure),
// one fresh ES solve per eps.
std::vector<RemainderRow> remainder_curve(const Discretization& disc, const ProblemData& data,
                                          const Solution& pp,
                                          const std::vector<ExpansionTerm>& terms,
                                          const std::vector<double>& eps_grid);

// Partial sum sum_{i=0..k} eps^{-i} v^(i) (order 0 term from the PP solution).
Field velocity_partial_sum(const Solution& pp, const std::vector<ExpansionTerm>& terms, int k,
                           double eps);
Field pressure_partial_sum(const Solution& pp, const std::vector<ExpansionTerm>& terms, int k,
                           double eps);

// Solution of the eps-dependent term system (the scaled difference problem);
// order i >= 1. Used as the second route of the telescoping identity.
Solution solve_scaled_term(const Discretization& disc, const ProblemData& data,
                           const Solution& pp, const std::vector<ExpansionTerm>& terms, int order,
                           double eps);

}  // namespace estokes
