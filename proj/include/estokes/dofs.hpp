#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "estokes/elements.hpp"
#include "estokes/mesh.hpp"

namespace estokes {

enum class SpaceKind { P1Scalar, P2Scalar, P2Vector2 };

using ScalarFn = std::function<double(const Eigen::Vector2d&)>;
using VectorFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

// Node/dof numbering for one of the three Taylor-Hood spaces.
// Scalar nodes are vertices (P1) or vertices followed by edge midpoints (P2).
// Vector dofs interleave per node: (x-component, y-component).
struct DofMap {
  const Mesh* mesh = nullptr;
  SpaceKind kind = SpaceKind::P1Scalar;
  int n_dofs = 0;
  int n_nodes = 0;
  int components = 1;
  std::vector<std::vector<int>> cell_dofs;       // per cell, local-to-global
  std::vector<Eigen::Vector2d> node_coords;      // per scalar node
  std::vector<std::array<bool, 4>> node_sides;   // closure membership per side tag
  std::vector<bool> node_dirichlet;              // per scalar node

  Family family() const { return kind == SpaceKind::P1Scalar ? Family::P1 : Family::P2; }
  bool dof_dirichlet(int dof) const {
    return node_dirichlet[static_cast<std::size_t>(dof / components)];
  }
  int dof_node(int dof) const { return dof / components; }
};

// A node is classified Dirichlet iff it lies on the closure of a side in
// part.dirichlet_sides (corner rule: Dirichlet wins).
DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, const BoundaryPartition& part);

struct Field {
  const DofMap* dofmap = nullptr;
  Eigen::VectorXd coeffs;
};

Field interpolate(const DofMap& dofmap, const ScalarFn& f);
Field interpolate(const DofMap& dofmap, const VectorFn& f);

// (1/|Omega|) integral of a scalar FE function.
double mean_value(const Field& field, const Mesh& mesh);
Field subtract_mean(const Field& field, const Mesh& mesh);

// Point evaluation (structured meshes only; locates the containing cell).
double eval_scalar(const Field& field, const Eigen::Vector2d& x);
Eigen::Vector2d eval_vector(const Field& field, const Eigen::Vector2d& x);

int locate_cell(const Mesh& mesh, const Eigen::Vector2d& x);

// Field export as legacy-VTK point data. P2 fields are written as a point
// cloud over all nodes (vertices + midpoints).
void write_vtk_fields(const Mesh& mesh, const std::vector<std::pair<std::string, const Field*>>& fields,
                      const std::string& path);

}  // namespace estokes
