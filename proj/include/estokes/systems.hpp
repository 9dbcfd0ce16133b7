#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "estokes/assembly.hpp"
#include "estokes/dofs.hpp"
#include "estokes/mesh.hpp"
#include "estokes/norms.hpp"
#include "estokes/solve.hpp"

namespace estokes {

enum class PressureBC { Neumann, Mixed, Dirichlet };

struct ProblemData {
  VectorFn body_force;              // F
  ScalarFn div_f;                   // div F (analytic; required by G)
  VectorFn velocity_bc;             // u_b on Gamma
  BoundaryFn pressure_flux_bc;      // g_b (may depend on nu)
  ScalarFn pressure_bc_value;       // p_b on Gamma_D
  PressureBC pressure_bc = PressureBC::Neumann;
  BoundaryPartition partition;      // used when pressure_bc == Mixed
  double eps = 1.0;

  // Gamma_D for the pressure space: empty (Neumann), the partition's
  // Dirichlet sides (Mixed), or all four sides (Dirichlet).
  BoundaryPartition pressure_partition() const;
};

// Compatibility checks from the problem's data conditions; throws on
// violation. Tolerance 1e-10 relative to the data scale.
void validate_data(const Mesh& mesh, const ProblemData& data);

struct Discretization;

struct Solution {
  Field velocity;  // P2Vector2
  Field pressure;  // P1
  double residual_norm = 0.0;  // relative, of the monolithic free system
  std::optional<double> multiplier;
  // Keeps the dofmaps behind the fields alive when the solve built its own
  // Discretization; empty when the caller supplied one.
  std::shared_ptr<const Discretization> owned;
};

// Shared discretization state for one (mesh, data) pair; builds the
// Taylor-Hood spaces and the assembled blocks once.
struct Discretization {
  const Mesh* mesh = nullptr;
  DofMap velocity_space;   // P2Vector2, Dirichlet on all of Gamma
  DofMap pressure_space;   // P1, Dirichlet per pressure regime
  SparseMat vel_laplacian;     // A
  SparseMat grad_p;            // C: rows velocity, cols pressure
  SparseMat div_u;             // D: rows pressure, cols velocity
  SparseMat pressure_stiff;    // L
  SparseMat pressure_mass;
  Eigen::VectorXd pressure_integral;  // m_i = integral of psi_i

  Discretization(const Mesh& mesh, const ProblemData& data);
};

Solution solve_stokes(const Mesh& mesh, const ProblemData& data);
Solution solve_pp(const Mesh& mesh, const ProblemData& data);
Solution solve_es(const Mesh& mesh, const ProblemData& data);

// Variants reusing prebuilt blocks (one Discretization per mesh+regime).
Solution solve_stokes(const Discretization& disc, const ProblemData& data);
Solution solve_pp(const Discretization& disc, const ProblemData& data);
Solution solve_es(const Discretization& disc, const ProblemData& data);

// ES solve against prebuilt blocks, with an explicit G functional and
// boundary liftings; the general entry point behind solve_es and the
// expansion machinery.
Solution solve_es_with(const Discretization& disc, double eps, const Eigen::VectorXd& f_load,
                       const Eigen::VectorXd& g_functional, const Field& velocity_lift,
                       const Field& pressure_lift, PressureBC regime);

// The G functional of the pressure equation on the full P1 space.
Eigen::VectorXd pressure_load(const Discretization& disc, const ProblemData& data);

}  // namespace estokes
