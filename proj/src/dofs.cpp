#include "estokes/dofs.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace estokes {

namespace {

std::array<bool, 4> side_closure(const Eigen::Vector2d& p, const std::array<double, 4>& rect) {
  const double tol = 1e-12 * (std::abs(rect[2] - rect[0]) + std::abs(rect[3] - rect[1]) + 1.0);
  return {std::abs(p.x() - rect[0]) <= tol, std::abs(p.x() - rect[2]) <= tol,
          std::abs(p.y() - rect[1]) <= tol, std::abs(p.y() - rect[3]) <= tol};
}

}  // namespace

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, const BoundaryPartition& part) {
  DofMap dm;
  dm.mesh = &mesh;
  dm.kind = kind;
  dm.components = (kind == SpaceKind::P2Vector2) ? 2 : 1;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int ne = static_cast<int>(mesh.edges.size());
  dm.n_nodes = (kind == SpaceKind::P1Scalar) ? nv : nv + ne;
  dm.n_dofs = dm.components * dm.n_nodes;

  dm.node_coords.resize(static_cast<std::size_t>(dm.n_nodes));
  for (int v = 0; v < nv; ++v) dm.node_coords[static_cast<std::size_t>(v)] = mesh.vertices[static_cast<std::size_t>(v)];
  if (kind != SpaceKind::P1Scalar) {
    for (int e = 0; e < ne; ++e) {
      const Edge& edge = mesh.edges[static_cast<std::size_t>(e)];
      dm.node_coords[static_cast<std::size_t>(nv + e)] =
          0.5 * (mesh.vertices[static_cast<std::size_t>(edge.vertices[0])] +
                 mesh.vertices[static_cast<std::size_t>(edge.vertices[1])]);
    }
  }

  // A midpoint node lies on a side closure only if its whole edge does; the
  // coordinate test gives exactly that for axis-aligned sides.
  dm.node_sides.resize(static_cast<std::size_t>(dm.n_nodes));
  dm.node_dirichlet.assign(static_cast<std::size_t>(dm.n_nodes), false);
  for (int n = 0; n < dm.n_nodes; ++n) {
    auto closure = side_closure(dm.node_coords[static_cast<std::size_t>(n)], mesh.rect);
    dm.node_sides[static_cast<std::size_t>(n)] = closure;
    bool dir = false;
    for (int s = 0; s < 4; ++s) {
      if (closure[static_cast<std::size_t>(s)] && part.dirichlet_sides.contains(static_cast<Side>(s))) dir = true;
    }
    dm.node_dirichlet[static_cast<std::size_t>(n)] = dir;
  }

  dm.cell_dofs.resize(mesh.triangles.size());
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const auto& t = mesh.triangles[c];
    std::vector<int> nodes;
    nodes.assign(t.begin(), t.end());
    if (kind != SpaceKind::P1Scalar) {
      nodes.push_back(nv + mesh.edge_between(t[0], t[1]));
      nodes.push_back(nv + mesh.edge_between(t[1], t[2]));
      nodes.push_back(nv + mesh.edge_between(t[2], t[0]));
    }
    std::vector<int>& dofs = dm.cell_dofs[c];
    for (int node : nodes) {
      for (int comp = 0; comp < dm.components; ++comp) dofs.push_back(dm.components * node + comp);
    }
  }
  return dm;
}

Field interpolate(const DofMap& dofmap, const ScalarFn& f) {
  if (dofmap.components != 1) {
    throw std::invalid_argument("interpolate: scalar function on a vector space");
  }
  Field field;
  field.dofmap = &dofmap;
  field.coeffs.resize(dofmap.n_dofs);
  for (int n = 0; n < dofmap.n_nodes; ++n) {
    field.coeffs(n) = f(dofmap.node_coords[static_cast<std::size_t>(n)]);
  }
  return field;
}

Field interpolate(const DofMap& dofmap, const VectorFn& f) {
  if (dofmap.components != 2) {
    throw std::invalid_argument("interpolate: vector function on a scalar space");
  }
  Field field;
  field.dofmap = &dofmap;
  field.coeffs.resize(dofmap.n_dofs);
  for (int n = 0; n < dofmap.n_nodes; ++n) {
    Eigen::Vector2d v = f(dofmap.node_coords[static_cast<std::size_t>(n)]);
    field.coeffs(2 * n) = v.x();
    field.coeffs(2 * n + 1) = v.y();
  }
  return field;
}

double mean_value(const Field& field, const Mesh& mesh) {
  const DofMap& dm = *field.dofmap;
  if (dm.components != 1) {
    throw std::invalid_argument("mean_value: requires a scalar field");
  }
  const QuadratureRule rule = triangle_rule(2);
  double integral = 0.0;
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    const AffineMap map = geometry_map(mesh, static_cast<int>(c));
    const std::vector<int>& dofs = dm.cell_dofs[c];
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      BasisEval be = eval_basis(dm.family(), rule.points.row(q).transpose());
      double val = 0.0;
      for (std::size_t k = 0; k < dofs.size(); ++k) {
        val += be.values(static_cast<Eigen::Index>(k)) * field.coeffs(dofs[k]);
      }
      integral += rule.weights(q) * map.determinant * val;
    }
  }
  return integral / mesh.area();
}

Field subtract_mean(const Field& field, const Mesh& mesh) {
  Field out = field;
  out.coeffs.array() -= mean_value(field, mesh);
  return out;
}

int locate_cell(const Mesh& mesh, const Eigen::Vector2d& x) {
  if (mesh.nx > 0 && mesh.ny > 0) {
    const double hx = (mesh.rect[2] - mesh.rect[0]) / mesh.nx;
    const double hy = (mesh.rect[3] - mesh.rect[1]) / mesh.ny;
    int i = std::min(mesh.nx - 1, std::max(0, static_cast<int>(std::floor((x.x() - mesh.rect[0]) / hx))));
    int j = std::min(mesh.ny - 1, std::max(0, static_cast<int>(std::floor((x.y() - mesh.rect[1]) / hy))));
    double xi = (x.x() - mesh.rect[0]) / hx - i;
    double eta = (x.y() - mesh.rect[1]) / hy - j;
    int base = 2 * (j * mesh.nx + i);
    return (eta <= xi) ? base : base + 1;
  }
  for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
    AffineMap map = geometry_map(mesh, static_cast<int>(c));
    Eigen::Vector2d ref = map.pull_back(x);
    const double tol = 1e-12;
    if (ref.x() >= -tol && ref.y() >= -tol && ref.x() + ref.y() <= 1.0 + tol) {
      return static_cast<int>(c);
    }
  }
  throw std::invalid_argument("locate_cell: point outside the mesh");
}

namespace {

Eigen::VectorXd eval_local(const Field& field, const Eigen::Vector2d& x) {
  const DofMap& dm = *field.dofmap;
  const Mesh& mesh = *dm.mesh;
  int cell = locate_cell(mesh, x);
  AffineMap map = geometry_map(mesh, cell);
  Eigen::Vector2d ref = map.pull_back(x);
  ref.x() = std::min(1.0, std::max(0.0, ref.x()));
  ref.y() = std::min(1.0 - ref.x(), std::max(0.0, ref.y()));
  BasisEval be = eval_basis(dm.family(), ref);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dm.components);
  const std::vector<int>& dofs = dm.cell_dofs[static_cast<std::size_t>(cell)];
  const int nb = basis_size(dm.family());
  for (int k = 0; k < nb; ++k) {
    for (int comp = 0; comp < dm.components; ++comp) {
      out(comp) += be.values(k) * field.coeffs(dofs[static_cast<std::size_t>(dm.components * k + comp)]);
    }
  }
  return out;
}

}  // namespace

double eval_scalar(const Field& field, const Eigen::Vector2d& x) {
  if (field.dofmap->components != 1) {
    throw std::invalid_argument("eval_scalar: vector field");
  }
  return eval_local(field, x)(0);
}

Eigen::Vector2d eval_vector(const Field& field, const Eigen::Vector2d& x) {
  if (field.dofmap->components != 2) {
    throw std::invalid_argument("eval_vector: scalar field");
  }
  Eigen::VectorXd v = eval_local(field, x);
  return {v(0), v(1)};
}

void write_vtk_fields(const Mesh& mesh,
                      const std::vector<std::pair<std::string, const Field*>>& fields,
                      const std::string& path) {
  bool any_p2 = false;
  for (const auto& [name, f] : fields) {
    if (f->dofmap->kind != SpaceKind::P1Scalar) any_p2 = true;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_fields: cannot open " + path);
  out.precision(17);
  out << "# vtk DataFile Version 2.0\nfields\nASCII\nDATASET UNSTRUCTURED_GRID\n";

  if (!any_p2) {
    out << "POINTS " << mesh.vertices.size() << " double\n";
    for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << " 0\n";
    out << "CELLS " << mesh.triangles.size() << " " << 4 * mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.triangles.size() << "\n";
    for (std::size_t c = 0; c < mesh.triangles.size(); ++c) out << "5\n";
    out << "POINT_DATA " << mesh.vertices.size() << "\n";
    for (const auto& [name, f] : fields) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (std::size_t v = 0; v < mesh.vertices.size(); ++v) out << f->coeffs(static_cast<Eigen::Index>(v)) << "\n";
    }
    return;
  }

  // P2 data present: write all fields over the vertex+midpoint point cloud.
  std::vector<Eigen::Vector2d> pts = mesh.vertices;
  for (const Edge& e : mesh.edges) {
    pts.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(e.vertices[0])] +
                         mesh.vertices[static_cast<std::size_t>(e.vertices[1])]));
  }
  out << "POINTS " << pts.size() << " double\n";
  for (const auto& p : pts) out << p.x() << " " << p.y() << " 0\n";
  out << "CELLS " << pts.size() << " " << 2 * pts.size() << "\n";
  for (std::size_t i = 0; i < pts.size(); ++i) out << "1 " << i << "\n";
  out << "CELL_TYPES " << pts.size() << "\n";
  for (std::size_t i = 0; i < pts.size(); ++i) out << "1\n";
  out << "POINT_DATA " << pts.size() << "\n";
  for (const auto& [name, f] : fields) {
    const DofMap& dm = *f->dofmap;
    if (dm.components == 2) {
      out << "VECTORS " << name << " double\n";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        Eigen::Vector2d v = eval_vector(*f, pts[i]);
        out << v.x() << " " << v.y() << " 0\n";
      }
    } else {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (std::size_t i = 0; i < pts.size(); ++i) out << eval_scalar(*f, pts[i]) << "\n";
    }
  }
}

}  // namespace estokes
