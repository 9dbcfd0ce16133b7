#include "estokes/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace estokes {

namespace {

// Boundary integral of u_b . nu (two-point Gauss per edge).
double boundary_flux(const Mesh& mesh, const VectorFn& u_b) {
  const QuadratureRule rule = edge_rule(3);
  double flux = 0.0;
  for (const BoundaryEdge& be : mesh.boundary_edges) {
    const Edge& edge = mesh.edges[static_cast<std::size_t>(be.edge)];
    const Eigen::Vector2d a = mesh.vertices[static_cast<std::size_t>(edge.vertices[0])];
    const Eigen::Vector2d b = mesh.vertices[static_cast<std::size_t>(edge.vertices[1])];
    const double len = (b - a).norm();
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const Eigen::Vector2d x = a + rule.points(q, 0) * (b - a);
      flux += rule.weights(q) * len * u_b(x).dot(be.normal);
    }
  }
  return flux;
}

double boundary_integral(const Mesh& mesh, const BoundaryFn& g_b) {
  const QuadratureRule rule = edge_rule(3);
  double total = 0.0;
  for (const BoundaryEdge& be : mesh.boundary_edges) {
    const Edge& edge = mesh.edges[static_cast<std::size_t>(be.edge)];
    const Eigen::Vector2d a = mesh.vertices[static_cast<std::size_t>(edge.vertices[0])];
    const Eigen::Vector2d b = mesh.vertices[static_cast<std::size_t>(edge.vertices[1])];
    const double len = (b - a).norm();
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      const Eigen::Vector2d x = a + rule.points(q, 0) * (b - a);
      total += rule.weights(q) * len * g_b(x, be.normal);
    }
  }
  return total;
}

double volume_integral(const Mesh& mesh, const ScalarFn& f) {
  const QuadratureRule rule = triangle_rule(4);
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const AffineMap map = geometry_map(mesh, static_cast<int>(c));
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      total += rule.weights(q) * map.determinant * f(map.apply(rule.points.row(q).transpose()));
    }
  }
  return total;
}

Field masked_lift(const DofMap& space, const Field& values) {
  Field lift;
  lift.dofmap = &space;
  lift.coeffs = Eigen::VectorXd::Zero(space.n_dofs);
  for (int d = 0; d < space.n_dofs; ++d) {
    if (space.dof_dirichlet(d)) lift.coeffs(d) = values.coeffs(d);
  }
  return lift;
}

Field zero_field(const DofMap& space) {
  Field f;
  f.dofmap = &space;
  f.coeffs = Eigen::VectorXd::Zero(space.n_dofs);
  return f;
}

std::vector<int> free_dofs(const DofMap& space) {
  std::vector<int> free;
  for (int d = 0; d < space.n_dofs; ++d) {
    if (!space.dof_dirichlet(d)) free.push_back(d);
  }
  return free;
}

void append_block(std::vector<Eigen::Triplet<double>>& trips, const SparseMat& block,
                  const std::vector<int>& row_map, const std::vector<int>& col_map,
                  int row_offset, int col_offset, double scale = 1.0) {
  for (int k = 0; k < block.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(block, k); it; ++it) {
      const int r = row_map[static_cast<std::size_t>(it.row())];
      const int c = col_map[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) trips.emplace_back(row_offset + r, col_offset + c, scale * it.value());
    }
  }
}

std::vector<int> index_map(int n, const std::vector<int>& free) {
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < free.size(); ++i) map[static_cast<std::size_t>(free[i])] = static_cast<int>(i);
  return map;
}

}  // namespace

BoundaryPartition ProblemData::pressure_partition() const {
  BoundaryPartition part;
  switch (pressure_bc) {
    case PressureBC::Neumann:
      part.neumann_sides = SideSet::all();
      break;
    case PressureBC::Mixed:
      part = partition;
      break;
    case PressureBC::Dirichlet:
      part.dirichlet_sides = SideSet::all();
      break;
  }
  return part;
}

void validate_data(const Mesh& mesh, const ProblemData& data) {
  if (!data.velocity_bc) throw std::invalid_argument("problem data: u_b is required");
  const double flux = boundary_flux(mesh, data.velocity_bc);
  if (std::abs(flux) > 1e-10 * (1.0 + mesh.area())) {
    throw std::invalid_argument("problem data: velocity boundary data violates the zero net "
                                "flux condition (integral " + std::to_string(flux) + ")");
  }
  if (data.pressure_bc == PressureBC::Mixed && data.partition.dirichlet_sides.empty()) {
    throw std::invalid_argument("problem data: mixed pressure regime requires a nonempty "
                                "Dirichlet side set");
  }
  if (data.pressure_bc == PressureBC::Neumann) {
    const double gb = data.pressure_flux_bc ? boundary_integral(mesh, data.pressure_flux_bc) : 0.0;
    const double df = data.div_f ? volume_integral(mesh, data.div_f) : 0.0;
    const double scale = 1.0 + std::abs(gb) + std::abs(df);
    if (std::abs(gb - df) > 1e-10 * scale) {
      throw std::invalid_argument("problem data: Neumann compatibility defect " +
                                  std::to_string(gb - df) + " exceeds tolerance");
    }
  }
}

Discretization::Discretization(const Mesh& m, const ProblemData& data) : mesh(&m) {
  BoundaryPartition all_dirichlet;
  all_dirichlet.dirichlet_sides = SideSet::all();
  velocity_space = build_dofmap(m, SpaceKind::P2Vector2, all_dirichlet);
  pressure_space = build_dofmap(m, SpaceKind::P1Scalar, data.pressure_partition());
  vel_laplacian = assemble_matrix(m, velocity_space, velocity_space, Form::LaplacianVector);
  grad_p = assemble_matrix(m, velocity_space, pressure_space, Form::GradPDotV);
  div_u = assemble_matrix(m, pressure_space, velocity_space, Form::DivUTimesQ);
  pressure_stiff = assemble_matrix(m, pressure_space, pressure_space, Form::LaplacianScalar);
  pressure_mass = assemble_matrix(m, pressure_space, pressure_space, Form::Mass);
  pressure_integral = pressure_mass * Eigen::VectorXd::Ones(pressure_space.n_dofs);
}

Eigen::VectorXd pressure_load(const Discretization& disc, const ProblemData& data) {
  const Mesh& mesh = *disc.mesh;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(disc.pressure_space.n_dofs);
  if (data.pressure_flux_bc) {
    SideSet sides;
    if (data.pressure_bc == PressureBC::Neumann) {
      sides = SideSet::all();
    } else if (data.pressure_bc == PressureBC::Mixed) {
      sides = data.partition.neumann_sides;
    }
    if (!sides.empty()) {
      g += assemble_neumann_boundary(mesh, disc.pressure_space, data.pressure_flux_bc, sides);
    }
  }
  if (data.div_f) {
    g -= assemble_div_f_volume(mesh, disc.pressure_space, data.div_f);
  }
  return g;
}

Solution solve_es_with(const Discretization& disc, double eps, const Eigen::VectorXd& f_load,
                       const Eigen::VectorXd& g_functional, const Field& velocity_lift,
                       const Field& pressure_lift, PressureBC regime) {
  if (!(eps > 0.0)) throw std::invalid_argument("solve_es: eps must be positive");
  const std::vector<int> fv = free_dofs(disc.velocity_space);
  const std::vector<int> fp = free_dofs(disc.pressure_space);
  const std::vector<int> vmap = index_map(disc.velocity_space.n_dofs, fv);
  const std::vector<int> pmap = index_map(disc.pressure_space.n_dofs, fp);
  const int nv = static_cast<int>(fv.size());
  const int np = static_cast<int>(fp.size());
  const bool multiplier = (regime == PressureBC::Neumann);
  const int n = nv + np + (multiplier ? 1 : 0);

  std::vector<Eigen::Triplet<double>> trips;
  append_block(trips, disc.vel_laplacian, vmap, vmap, 0, 0);
  append_block(trips, disc.grad_p, vmap, pmap, 0, nv);
  append_block(trips, disc.div_u, pmap, vmap, nv, 0);
  append_block(trips, disc.pressure_stiff, pmap, pmap, nv, nv, eps);
  if (multiplier) {
    for (int j = 0; j < np; ++j) {
      const double m = disc.pressure_integral(fp[static_cast<std::size_t>(j)]);
      trips.emplace_back(nv + j, n - 1, m);
      trips.emplace_back(n - 1, nv + j, m);
    }
  }
  SparseMat sys(n, n);
  sys.setFromTriplets(trips.begin(), trips.end());

  const Eigen::VectorXd rv =
      f_load - disc.vel_laplacian * velocity_lift.coeffs - disc.grad_p * pressure_lift.coeffs;
  const Eigen::VectorXd rp = eps * g_functional - disc.div_u * velocity_lift.coeffs -
                             eps * (disc.pressure_stiff * pressure_lift.coeffs);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < nv; ++i) rhs(i) = rv(fv[static_cast<std::size_t>(i)]);
  for (int j = 0; j < np; ++j) rhs(nv + j) = rp(fp[static_cast<std::size_t>(j)]);

  const Eigen::VectorXd sol = solve_sparse(sys, rhs);

  Solution out;
  out.residual_norm = relative_residual(sys, sol, rhs);
  out.velocity.dofmap = &disc.velocity_space;
  out.velocity.coeffs = velocity_lift.coeffs;
  for (int i = 0; i < nv; ++i) out.velocity.coeffs(fv[static_cast<std::size_t>(i)]) = sol(i) + velocity_lift.coeffs(fv[static_cast<std::size_t>(i)]);
  out.pressure.dofmap = &disc.pressure_space;
  out.pressure.coeffs = pressure_lift.coeffs;
  for (int j = 0; j < np; ++j) out.pressure.coeffs(fp[static_cast<std::size_t>(j)]) = sol(nv + j) + pressure_lift.coeffs(fp[static_cast<std::size_t>(j)]);
  if (multiplier) out.multiplier = sol(n - 1);
  return out;
}

Solution solve_es(const Mesh& mesh, const ProblemData& data) {
  validate_data(mesh, data);
  if (!(data.eps > 0.0)) throw std::invalid_argument("solve_es: eps must be positive");
  auto disc = std::make_shared<Discretization>(mesh, data);
  Solution sol = solve_es(*disc, data);
  sol.owned = disc;
  return sol;
}

Solution solve_es(const Discretization& disc, const ProblemData& data) {
  const Mesh& mesh = *disc.mesh;
  const Eigen::VectorXd f_load =
      data.body_force ? assemble_body_force(mesh, disc.velocity_space, data.body_force)
                      : Eigen::VectorXd::Zero(disc.velocity_space.n_dofs);
  const Eigen::VectorXd g = pressure_load(disc, data);
  const Field vel_lift = masked_lift(disc.velocity_space,
                                     interpolate(disc.velocity_space, data.velocity_bc));
  Field p_lift = zero_field(disc.pressure_space);
  if (data.pressure_bc != PressureBC::Neumann) {
    if (!data.pressure_bc_value) {
      throw std::invalid_argument("solve_es: p_b required for mixed/Dirichlet pressure conditions");
    }
    p_lift = masked_lift(disc.pressure_space,
                         interpolate(disc.pressure_space, data.pressure_bc_value));
  }
  return solve_es_with(disc, data.eps, f_load, g, vel_lift, p_lift, data.pressure_bc);
}

Solution solve_pp(const Mesh& mesh, const ProblemData& data) {
  validate_data(mesh, data);
  auto disc = std::make_shared<Discretization>(mesh, data);
  Solution sol = solve_pp(*disc, data);
  sol.owned = disc;
  return sol;
}

Solution solve_pp(const Discretization& disc, const ProblemData& data) {
  const Mesh& mesh = *disc.mesh;
  const Eigen::VectorXd g = pressure_load(disc, data);

  Solution out;
  out.pressure.dofmap = &disc.pressure_space;
  double pressure_residual = 0.0;

  if (data.pressure_bc == PressureBC::Neumann) {
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (std::abs(g.sum()) > 1e-8 * scale) {
      throw std::invalid_argument("solve_pp: Neumann load fails to annihilate constants");
    }
    const int n = disc.pressure_space.n_dofs;
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<int> id(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
    append_block(trips, disc.pressure_stiff, id, id, 0, 0);
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, n, disc.pressure_integral(i));
      trips.emplace_back(n, i, disc.pressure_integral(i));
    }
    SparseMat sys(n + 1, n + 1);
    sys.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = g;
    rhs(n) = 0.0;
    const Eigen::VectorXd sol = solve_sparse(sys, rhs);
    pressure_residual = relative_residual(sys, sol, rhs);
    out.pressure.coeffs = sol.head(n);
    out.multiplier = sol(n);
  } else {
    if (!data.pressure_bc_value) {
      throw std::invalid_argument("solve_pp: p_b required for mixed/Dirichlet pressure conditions");
    }
    const Field p_b = interpolate(disc.pressure_space, data.pressure_bc_value);
    AssembledSystem reduced = apply_dirichlet(disc.pressure_stiff, g, disc.pressure_space, p_b);
    const Eigen::VectorXd sol = solve_sparse(reduced.matrix, reduced.rhs);
    pressure_residual = relative_residual(reduced.matrix, sol, reduced.rhs);
    out.pressure.coeffs = reduced.reconstruct(sol);
  }

  // Velocity step: vector Laplace problem with the discrete pressure
  // gradient in the load.
  const Eigen::VectorXd f_load =
      data.body_force ? assemble_body_force(mesh, disc.velocity_space, data.body_force)
                      : Eigen::VectorXd::Zero(disc.velocity_space.n_dofs);
  const Eigen::VectorXd rhs_v = f_load - disc.grad_p * out.pressure.coeffs;
  const Field u_b = interpolate(disc.velocity_space, data.velocity_bc);
  AssembledSystem reduced = apply_dirichlet(disc.vel_laplacian, rhs_v, disc.velocity_space, u_b);
  const Eigen::VectorXd sol = solve_sparse(reduced.matrix, reduced.rhs);
  out.velocity.dofmap = &disc.velocity_space;
  out.velocity.coeffs = reduced.reconstruct(sol);
  out.residual_norm = std::max(pressure_residual, relative_residual(reduced.matrix, sol, reduced.rhs));
  return out;
}

Solution solve_stokes(const Mesh& mesh, const ProblemData& data) {
  validate_data(mesh, data);
  // The Stokes pressure lives in L2/R regardless of the PP/ES regime.
  ProblemData neumann_view = data;
  neumann_view.pressure_bc = PressureBC::Neumann;
  neumann_view.pressure_flux_bc = nullptr;
  auto disc = std::make_shared<Discretization>(mesh, neumann_view);
  Solution sol = solve_stokes(*disc, data);
  sol.owned = disc;
  return sol;
}

Solution solve_stokes(const Discretization& disc, const ProblemData& data) {
  const Mesh& mesh = *disc.mesh;
  const std::vector<int> fv = free_dofs(disc.velocity_space);
  const std::vector<int> vmap = index_map(disc.velocity_space.n_dofs, fv);
  const int nv = static_cast<int>(fv.size());
  const int np = disc.pressure_space.n_dofs;
  const int n = nv + np + 1;
  std::vector<int> id(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) id[static_cast<std::size_t>(i)] = i;

  std::vector<Eigen::Triplet<double>> trips;
  append_block(trips, disc.vel_laplacian, vmap, vmap, 0, 0);
  // <grad p, phi> := -int p div phi, the transpose of the div block.
  for (int k = 0; k < disc.div_u.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(disc.div_u, k); it; ++it) {
      const int r = vmap[static_cast<std::size_t>(it.col())];
      if (r >= 0) trips.emplace_back(r, nv + static_cast<int>(it.row()), -it.value());
    }
  }
  append_block(trips, disc.div_u, id, vmap, nv, 0);
  for (int j = 0; j < np; ++j) {
    trips.emplace_back(nv + j, n - 1, disc.pressure_integral(j));
    trips.emplace_back(n - 1, nv + j, disc.pressure_integral(j));
  }
  SparseMat sys(n, n);
  sys.setFromTriplets(trips.begin(), trips.end());

  const Eigen::VectorXd f_load =
      data.body_force ? assemble_body_force(mesh, disc.velocity_space, data.body_force)
                      : Eigen::VectorXd::Zero(disc.velocity_space.n_dofs);
  const Field vel_lift = masked_lift(disc.velocity_space,
                                     interpolate(disc.velocity_space, data.velocity_bc));
  const Eigen::VectorXd rv = f_load - disc.vel_laplacian * vel_lift.coeffs;
  const Eigen::VectorXd rp = -(disc.div_u * vel_lift.coeffs);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < nv; ++i) rhs(i) = rv(fv[static_cast<std::size_t>(i)]);
  rhs.segment(nv, np) = rp;

  const Eigen::VectorXd sol = solve_sparse(sys, rhs);

  Solution out;
  out.residual_norm = relative_residual(sys, sol, rhs);
  out.velocity.dofmap = &disc.velocity_space;
  out.velocity.coeffs = vel_lift.coeffs;
  for (int i = 0; i < nv; ++i) out.velocity.coeffs(fv[static_cast<std::size_t>(i)]) += sol(i);
  out.pressure.dofmap = &disc.pressure_space;
  out.pressure.coeffs = sol.segment(nv, np);
  out.multiplier = sol(n - 1);
  return out;
}

}  // namespace estokes
