#include "estokes/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace estokes {

const char* side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
    default: return "none";
  }
}

SideSet SideSet::all() {
  SideSet s;
  s.flags = {{true, true, true, true}};
  return s;
}

SideSet SideSet::none() { return SideSet{}; }

SideSet SideSet::of(std::initializer_list<Side> sides) {
  SideSet s;
  for (Side v : sides) {
    s.flags[static_cast<std::size_t>(static_cast<int>(v))] = true;
  }
  return s;
}

double Mesh::triangle_area(int cell) const {
  const auto& t = triangles[static_cast<std::size_t>(cell)];
  Eigen::Vector2d a = vertices[static_cast<std::size_t>(t[0])];
  Eigen::Vector2d b = vertices[static_cast<std::size_t>(t[1])];
  Eigen::Vector2d c = vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

int Mesh::edge_between(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = edge_lookup.find({a, b});
  return it == edge_lookup.end() ? -1 : it->second;
}

namespace {

Side classify_side(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const std::array<double, 4>& rect) {
  const double tol = 1e-12 * (std::abs(rect[2] - rect[0]) + std::abs(rect[3] - rect[1]));
  auto on = [&](double va, double vb, double line) {
    return std::abs(va - line) <= tol && std::abs(vb - line) <= tol;
  };
  if (on(a.x(), b.x(), rect[0])) return Side::Left;
  if (on(a.x(), b.x(), rect[2])) return Side::Right;
  if (on(a.y(), b.y(), rect[1])) return Side::Bottom;
  if (on(a.y(), b.y(), rect[3])) return Side::Top;
  return Side::None;
}

}  // namespace

Mesh make_mesh(std::vector<Eigen::Vector2d> vertices,
               std::vector<std::array<int, 3>> triangles,
               const std::array<double, 4>& rect) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.rect = rect;

  // Edge table in deterministic (sorted vertex pair) order.
  std::map<std::array<int, 2>, std::vector<int>> table;
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const auto& t = mesh.triangles[c];
    for (int k = 0; k < 3; ++k) {
      int a = t[static_cast<std::size_t>(k)];
      int b = t[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      table[{a, b}].push_back(static_cast<int>(c));
    }
  }
  for (auto& [key, tris] : table) {
    Edge e;
    e.vertices = key;
    e.triangles = tris;
    mesh.edge_lookup[key] = static_cast<int>(mesh.edges.size());
    mesh.edges.push_back(std::move(e));
  }

  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const Edge& edge = mesh.edges[e];
    if (edge.triangles.size() != 1) continue;
    const Eigen::Vector2d& a = mesh.vertices[static_cast<std::size_t>(edge.vertices[0])];
    const Eigen::Vector2d& b = mesh.vertices[static_cast<std::size_t>(edge.vertices[1])];
    Eigen::Vector2d tangent = b - a;
    Eigen::Vector2d normal(tangent.y(), -tangent.x());
    normal.normalize();
    // Orient away from the incident triangle's centroid.
    const auto& t = mesh.triangles[static_cast<std::size_t>(edge.triangles[0])];
    Eigen::Vector2d centroid = (mesh.vertices[static_cast<std::size_t>(t[0])] +
                                mesh.vertices[static_cast<std::size_t>(t[1])] +
                                mesh.vertices[static_cast<std::size_t>(t[2])]) /
                               3.0;
    Eigen::Vector2d mid = 0.5 * (a + b);
    if (normal.dot(mid - centroid) < 0.0) normal = -normal;
    BoundaryEdge be;
    be.edge = static_cast<int>(e);
    be.side = classify_side(a, b, mesh.rect);
    be.normal = normal;
    mesh.boundary_edges.push_back(be);
  }
  return mesh;
}

Mesh build_structured(int nx, int ny, const std::array<double, 4>& rect) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_structured: subdivision counts must be >= 1, got nx=" +
                                std::to_string(nx) + ", ny=" + std::to_string(ny));
  }
  if (!(rect[2] > rect[0]) || !(rect[3] > rect[1])) {
    throw std::invalid_argument("build_structured: degenerate rectangle (need x1 > x0 and y1 > y0)");
  }

  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  const double hx = (rect[2] - rect[0]) / nx;
  const double hy = (rect[3] - rect[1]) / ny;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.emplace_back(rect[0] + i * hx, rect[1] + j * hy);
    }
  }

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  // Every cell split along the lower-left to upper-right diagonal.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  Mesh mesh = make_mesh(std::move(vertices), std::move(triangles), rect);
  mesh.nx = nx;
  mesh.ny = ny;
  return mesh;
}

std::vector<int> boundary_edges_of(const Mesh& mesh, const BoundaryPartition& part,
                                   BoundaryKind which) {
  const SideSet& sides =
      (which == BoundaryKind::Dirichlet) ? part.dirichlet_sides : part.neumann_sides;
  std::vector<int> out;
  for (std::size_t b = 0; b < mesh.boundary_edges.size(); ++b) {
    if (sides.contains(mesh.boundary_edges[b].side)) out.push_back(static_cast<int>(b));
  }
  return out;
}

std::vector<std::string> validate(const Mesh& mesh) {
  std::vector<std::string> diags;
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    if (mesh.triangle_area(static_cast<int>(c)) <= 0.0) {
      diags.push_back("negative area at cell " + std::to_string(c));
    }
  }
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    std::size_t n = mesh.edges[e].triangles.size();
    if (n != 1 && n != 2) {
      diags.push_back("edge " + std::to_string(e) + " with " + std::to_string(n) +
                      " incident triangles");
    }
  }
  long euler = static_cast<long>(mesh.vertices.size()) - static_cast<long>(mesh.edges.size()) +
               static_cast<long>(mesh.triangles.size()) + 1;
  if (euler != 2) {
    diags.push_back("Euler relation violated: V-E+T+1 = " + std::to_string(euler));
  }
  for (const BoundaryEdge& be : mesh.boundary_edges) {
    if (std::abs(be.normal.norm() - 1.0) > 1e-12) {
      diags.push_back("boundary edge " + std::to_string(be.edge) + " has non-unit normal");
    }
    const Edge& edge = mesh.edges[static_cast<std::size_t>(be.edge)];
    const auto& t = mesh.triangles[static_cast<std::size_t>(edge.triangles[0])];
    Eigen::Vector2d centroid = (mesh.vertices[static_cast<std::size_t>(t[0])] +
                                mesh.vertices[static_cast<std::size_t>(t[1])] +
                                mesh.vertices[static_cast<std::size_t>(t[2])]) /
                               3.0;
    Eigen::Vector2d mid = 0.5 * (mesh.vertices[static_cast<std::size_t>(edge.vertices[0])] +
                                 mesh.vertices[static_cast<std::size_t>(edge.vertices[1])]);
    if (be.normal.dot(mid - centroid) <= 0.0) {
      diags.push_back("boundary edge " + std::to_string(be.edge) + " normal points inward");
    }
  }
  return diags;
}

void write_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);
  out << "# vtk DataFile Version 2.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << " 0\n";
  out << "CELLS " << mesh.triangles.size() << " " << 4 * mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.triangles.size() << "\n";
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) out << "5\n";
}

}  // namespace estokes
