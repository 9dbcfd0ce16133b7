#pragma once

#include <array>
#include <string>
#include <vector>

#include "estokes/expr.hpp"
#include "estokes/norms.hpp"
#include "estokes/systems.hpp"

namespace estokes {

// A run description loaded from a JSON config file. Expressions are kept
// parsed; exact-solution entries feed error reporting only, never solves.
struct RunConfig {
  // [mesh]
  int nx = 32;
  int ny = 32;
  std::array<double, 4> rect{{0.0, 0.0, 1.0, 1.0}};

  // [problem]
  std::string problem = "es";  // stokes | pp | es
  PressureBC pressure_bc = PressureBC::Neumann;
  SideSet dirichlet_sides;  // pressure Dirichlet sides in the mixed regime
  double eps = 1.0;
  std::vector<double> eps_grid;
  int expansion_order = 1;           // k for `asymptotics`
  std::vector<int> mms_levels{8, 16, 32};

  // [data] — vectors are pairs of scalar expressions
  std::array<Expr, 2> f{};
  Expr div_f;
  std::array<Expr, 2> u_b{};
  Expr g_b;                       // scalar flux g_b, or
  std::array<Expr, 2> g_b_flux{};  // a vector G with g_b = G . nu
  Expr p_b;

  // optional exact solution for error reporting
  std::array<Expr, 2> exact_u{};
  std::array<Expr, 4> exact_grad_u{};  // du1/dx, du1/dy, du2/dx, du2/dy
  Expr exact_p;
  std::array<Expr, 2> exact_grad_p{};

  // [output]
  std::string out_dir = "out";

  bool has_exact_u() const { return exact_u[0] && exact_u[1]; }
  bool has_exact_p() const { return exact_p != nullptr; }
};

RunConfig load_config(const std::string& path);

// "start:stop:factor" -> geometric grid start, start*factor, ... <= stop
// (stop included when it lands on the grid within 1e-12 relative).
std::vector<double> parse_eps_grid(const std::string& text);

// Throws std::invalid_argument listing every violated constraint.
void validate_config(const RunConfig& config);

ProblemData problem_data(const RunConfig& config);

ScalarFn compile_scalar(const Expr& e);
VectorFn compile_vector(const Expr& e0, const Expr& e1);

// Exact-solution closures; throw if the config lacks the needed entries.
VectorFn exact_velocity(const RunConfig& config);
VectorJacFn exact_velocity_jacobian(const RunConfig& config);
ScalarFn exact_pressure(const RunConfig& config);
ScalarGradFn exact_pressure_gradient(const RunConfig& config);

}  // namespace estokes
