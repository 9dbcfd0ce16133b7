#include "estokes/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace estokes {

namespace {

using nlohmann::json;

Expr parse_entry(const json& j, const std::string& key) {
  if (!j.is_string()) {
    throw std::invalid_argument("config: '" + key + "' must be an expression string");
  }
  try {
    return parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw std::invalid_argument("config: '" + key + "': " + e.what());
  }
}

std::array<Expr, 2> parse_pair(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("config: '" + key + "' must be a pair of expression strings");
  }
  return {parse_entry(j[0], key + "[0]"), parse_entry(j[1], key + "[1]")};
}

Side parse_side(const std::string& name) {
  if (name == "left") return Side::Left;
  if (name == "right") return Side::Right;
  if (name == "bottom") return Side::Bottom;
  if (name == "top") return Side::Top;
  throw std::invalid_argument("config: unknown side '" + name + "'");
}

PressureBC parse_regime(const std::string& name) {
  if (name == "neumann") return PressureBC::Neumann;
  if (name == "mixed") return PressureBC::Mixed;
  if (name == "dirichlet") return PressureBC::Dirichlet;
  throw std::invalid_argument("config: unknown pressure_bc '" + name + "'");
}

}  // namespace

std::vector<double> parse_eps_grid(const std::string& text) {
  std::istringstream is(text);
  std::string part;
  std::vector<double> fields;
  while (std::getline(is, part, ':')) {
    try {
      std::size_t used = 0;
      fields.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw std::invalid_argument("eps grid: malformed number '" + part + "' in '" + text + "'");
    }
  }
  if (fields.size() != 3) {
    throw std::invalid_argument("eps grid: expected start:stop:factor, got '" + text + "'");
  }
  const double start = fields[0], stop = fields[1], factor = fields[2];
  if (!(start > 0.0) || !(stop >= start) || !(factor > 1.0)) {
    throw std::invalid_argument("eps grid: need 0 < start <= stop and factor > 1 in '" + text + "'");
  }
  std::vector<double> grid;
  for (double e = start; e <= stop * (1.0 + 1e-12); e *= factor) grid.push_back(std::min(e, stop));
  return grid;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: '" + path + "' is not valid JSON: " + e.what());
  }

  RunConfig c;
  if (j.contains("mesh")) {
    const json& m = j["mesh"];
    c.nx = m.value("nx", c.nx);
    c.ny = m.value("ny", c.ny);
    if (m.contains("rect")) {
      const json& r = m["rect"];
      if (!r.is_array() || r.size() != 4) {
        throw std::invalid_argument("config: mesh.rect must be [x0, y0, x1, y1]");
      }
      for (int i = 0; i < 4; ++i) c.rect[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)].get<double>();
    }
  }

  if (j.contains("problem")) {
    const json& p = j["problem"];
    c.problem = p.value("type", c.problem);
    if (p.contains("pressure_bc")) c.pressure_bc = parse_regime(p["pressure_bc"].get<std::string>());
    if (p.contains("dirichlet_sides")) {
      for (const auto& s : p["dirichlet_sides"]) {
        c.dirichlet_sides.flags[static_cast<std::size_t>(parse_side(s.get<std::string>()))] = true;
      }
    }
    c.eps = p.value("eps", c.eps);
    if (p.contains("eps_grid")) {
      if (p["eps_grid"].is_string()) {
        c.eps_grid = parse_eps_grid(p["eps_grid"].get<std::string>());
      } else {
        c.eps_grid = p["eps_grid"].get<std::vector<double>>();
      }
    }
    c.expansion_order = p.value("expansion_order", c.expansion_order);
    if (p.contains("mms_levels")) c.mms_levels = p["mms_levels"].get<std::vector<int>>();
  }

  if (j.contains("data")) {
    const json& d = j["data"];
    if (d.contains("f")) c.f = parse_pair(d["f"], "data.f");
    if (d.contains("div_f")) c.div_f = parse_entry(d["div_f"], "data.div_f");
    if (d.contains("u_b")) c.u_b = parse_pair(d["u_b"], "data.u_b");
    if (d.contains("g_b")) c.g_b = parse_entry(d["g_b"], "data.g_b");
    if (d.contains("g_b_flux")) c.g_b_flux = parse_pair(d["g_b_flux"], "data.g_b_flux");
    if (d.contains("p_b")) c.p_b = parse_entry(d["p_b"], "data.p_b");
    if (d.contains("exact_u")) c.exact_u = parse_pair(d["exact_u"], "data.exact_u");
    if (d.contains("exact_grad_u")) {
      const json& g = d["exact_grad_u"];
      if (!g.is_array() || g.size() != 4) {
        throw std::invalid_argument(
            "config: data.exact_grad_u must be [du1/dx, du1/dy, du2/dx, du2/dy]");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        c.exact_grad_u[i] = parse_entry(g[i], "data.exact_grad_u[" + std::to_string(i) + "]");
      }
    }
    if (d.contains("exact_p")) c.exact_p = parse_entry(d["exact_p"], "data.exact_p");
    if (d.contains("exact_grad_p")) c.exact_grad_p = parse_pair(d["exact_grad_p"], "data.exact_grad_p");
  }

  if (j.contains("output")) c.out_dir = j["output"].value("dir", c.out_dir);
  return c;
}

void validate_config(const RunConfig& c) {
  std::vector<std::string> problems;
  if (c.nx < 1 || c.ny < 1) problems.push_back("mesh.nx and mesh.ny must be >= 1");
  if (!(c.rect[2] > c.rect[0]) || !(c.rect[3] > c.rect[1])) {
    problems.push_back("mesh.rect must have positive extent");
  }
  if (c.problem != "stokes" && c.problem != "pp" && c.problem != "es") {
    problems.push_back("problem.type must be stokes, pp or es (got \"" + c.problem + "\")");
  }
  if (!(c.eps > 0.0)) problems.push_back("problem.eps must be positive");
  for (std::size_t i = 0; i < c.eps_grid.size(); ++i) {
    if (!(c.eps_grid[i] > 0.0) || (i > 0 && c.eps_grid[i] <= c.eps_grid[i - 1])) {
      problems.push_back("problem.eps_grid must be strictly increasing and positive");
      break;
    }
  }
  if (c.pressure_bc == PressureBC::Mixed && c.dirichlet_sides.empty()) {
    problems.push_back("mixed pressure regime needs problem.dirichlet_sides");
  }
  if ((c.pressure_bc == PressureBC::Mixed || c.pressure_bc == PressureBC::Dirichlet) && !c.p_b) {
    problems.push_back("pressure Dirichlet data requires data.p_b");
  }
  if (c.g_b && c.g_b_flux[0]) problems.push_back("give data.g_b or data.g_b_flux, not both");
  if (c.expansion_order < 1 || c.expansion_order > 3) {
    problems.push_back("problem.expansion_order must be in 1..3");
  }
  for (std::size_t i = 0; i < c.mms_levels.size(); ++i) {
    if (c.mms_levels[i] < 1 || (i > 0 && c.mms_levels[i] <= c.mms_levels[i - 1])) {
      problems.push_back("problem.mms_levels must be strictly increasing positive integers");
      break;
    }
  }
  if (c.has_exact_u() && !c.exact_grad_u[0]) {
    problems.push_back("data.exact_u requires data.exact_grad_u for H1 errors");
  }
  if (c.has_exact_p() && !c.exact_grad_p[0]) {
    problems.push_back("data.exact_p requires data.exact_grad_p for H1 errors");
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }
}

ScalarFn compile_scalar(const Expr& e) {
  if (!e) return [](const Eigen::Vector2d&) { return 0.0; };
  return [e](const Eigen::Vector2d& x) { return evaluate(e, x.x(), x.y()); };
}

VectorFn compile_vector(const Expr& e0, const Expr& e1) {
  const ScalarFn f0 = compile_scalar(e0);
  const ScalarFn f1 = compile_scalar(e1);
  return [f0, f1](const Eigen::Vector2d& x) { return Eigen::Vector2d(f0(x), f1(x)); };
}

ProblemData problem_data(const RunConfig& c) {
  ProblemData data;
  data.body_force = compile_vector(c.f[0], c.f[1]);
  data.div_f = compile_scalar(c.div_f);
  data.velocity_bc = compile_vector(c.u_b[0], c.u_b[1]);
  if (c.g_b_flux[0]) {
    const VectorFn flux = compile_vector(c.g_b_flux[0], c.g_b_flux[1]);
    data.pressure_flux_bc = [flux](const Eigen::Vector2d& x, const Eigen::Vector2d& nu) {
      return flux(x).dot(nu);
    };
  } else {
    const ScalarFn g = compile_scalar(c.g_b);
    data.pressure_flux_bc = [g](const Eigen::Vector2d& x, const Eigen::Vector2d&) { return g(x); };
  }
  data.pressure_bc_value = compile_scalar(c.p_b);
  data.pressure_bc = c.pressure_bc;
  if (c.pressure_bc == PressureBC::Mixed) {
    data.partition.dirichlet_sides = c.dirichlet_sides;
    for (std::size_t i = 0; i < 4; ++i) {
      data.partition.neumann_sides.flags[i] = !c.dirichlet_sides.flags[i];
    }
  }
  data.eps = c.eps;
  return data;
}

VectorFn exact_velocity(const RunConfig& c) {
  if (!c.has_exact_u()) throw std::invalid_argument("config: data.exact_u not given");
  return compile_vector(c.exact_u[0], c.exact_u[1]);
}

VectorJacFn exact_velocity_jacobian(const RunConfig& c) {
  if (!c.exact_grad_u[0]) throw std::invalid_argument("config: data.exact_grad_u not given");
  std::array<ScalarFn, 4> g;
  for (std::size_t i = 0; i < 4; ++i) g[i] = compile_scalar(c.exact_grad_u[i]);
  return [g](const Eigen::Vector2d& x) {
    Eigen::Matrix2d j;
    j << g[0](x), g[1](x), g[2](x), g[3](x);
    return j;
  };
}

ScalarFn exact_pressure(const RunConfig& c) {
  if (!c.has_exact_p()) throw std::invalid_argument("config: data.exact_p not given");
  return compile_scalar(c.exact_p);
}

ScalarGradFn exact_pressure_gradient(const RunConfig& c) {
  if (!c.exact_grad_p[0]) throw std::invalid_argument("config: data.exact_grad_p not given");
  const ScalarFn gx = compile_scalar(c.exact_grad_p[0]);
  const ScalarFn gy = compile_scalar(c.exact_grad_p[1]);
  return [gx, gy](const Eigen::Vector2d& x) { return Eigen::Vector2d(gx(x), gy(x)); };
}

}  // namespace estokes
