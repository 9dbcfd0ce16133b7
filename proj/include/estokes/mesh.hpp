#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace estokes {

enum class Side : int { Left = 0, Right = 1, Bottom = 2, Top = 3, None = 4 };

const char* side_name(Side s);

// Set of the four rectangle sides, used to address boundary conditions.
struct SideSet {
  std::array<bool, 4> flags{{false, false, false, false}};

  static SideSet all();
  static SideSet none();
  static SideSet of(std::initializer_list<Side> sides);

  bool contains(Side s) const {
    int i = static_cast<int>(s);
    return i < 4 && flags[static_cast<std::size_t>(i)];
  }
  bool empty() const { return !flags[0] && !flags[1] && !flags[2] && !flags[3]; }
};

struct BoundaryPartition {
  SideSet dirichlet_sides;
  SideSet neumann_sides;
};

struct Edge {
  std::array<int, 2> vertices;  // sorted ascending
  std::vector<int> triangles;   // incident cells, ascending
};

struct BoundaryEdge {
  int edge;  // index into Mesh::edges
  Side side;
  Eigen::Vector2d normal;  // unit outward
};

// Triangulation of an axis-aligned rectangle. Immutable after construction.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<Edge> edges;
  std::vector<BoundaryEdge> boundary_edges;
  std::array<double, 4> rect{{0.0, 0.0, 1.0, 1.0}};  // x0, y0, x1, y1
  int nx = 0;  // zero for meshes not built by build_structured
  int ny = 0;
  std::map<std::array<int, 2>, int> edge_lookup;  // sorted vertex pair -> edge index

  double area() const { return (rect[2] - rect[0]) * (rect[3] - rect[1]); }
  double triangle_area(int cell) const;
  // Index into edges for the edge joining vertices a, b; -1 if absent.
  int edge_between(int a, int b) const;
};

Mesh build_structured(int nx, int ny, const std::array<double, 4>& rect);

// Connectivity and boundary tagging for an explicit vertex/triangle list.
// Used by build_structured and by tests that craft meshes directly.
Mesh make_mesh(std::vector<Eigen::Vector2d> vertices,
               std::vector<std::array<int, 3>> triangles,
               const std::array<double, 4>& rect);

enum class BoundaryKind { Dirichlet, Neumann };

std::vector<int> boundary_edges_of(const Mesh& mesh, const BoundaryPartition& part,
                                   BoundaryKind which);

// Empty result means the mesh satisfies all invariants.
std::vector<std::string> validate(const Mesh& mesh);

void write_vtk(const Mesh& mesh, const std::string& path);

}  // namespace estokes
