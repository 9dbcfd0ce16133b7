#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "estokes/asymptotics.hpp"
#include "estokes/config.hpp"
#include "estokes/fit.hpp"
#include "estokes/systems.hpp"

namespace {

using namespace estokes;

constexpr double kNoiseRel = 1e-12;  // base noise floor relative to the data scale

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  int mesh_n = 0;
  double eps = 0.0;
  std::string eps_grid;
  std::string pressure_bc;
  std::string reference = "pp";
};

void add_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "configuration file")->required();
  cmd->add_option("--out", flags->out_dir, "output directory (overrides config)");
  cmd->add_option("--mesh-n", flags->mesh_n, "override mesh to n x n");
  cmd->add_option("--eps", flags->eps, "override epsilon");
  cmd->add_option("--eps-grid", flags->eps_grid, "override eps grid, start:stop:factor");
  cmd->add_option("--pressure-bc", flags->pressure_bc, "neumann | mixed | dirichlet");
}

RunConfig load_with_overrides(const CommonFlags& flags) {
  RunConfig c = load_config(flags.config_path);
  if (!flags.out_dir.empty()) c.out_dir = flags.out_dir;
  if (flags.mesh_n > 0) {
    c.nx = flags.mesh_n;
    c.ny = flags.mesh_n;
  }
  if (flags.eps != 0.0) c.eps = flags.eps;
  if (!flags.eps_grid.empty()) c.eps_grid = parse_eps_grid(flags.eps_grid);
  if (!flags.pressure_bc.empty()) {
    if (flags.pressure_bc == "neumann") c.pressure_bc = PressureBC::Neumann;
    else if (flags.pressure_bc == "mixed") c.pressure_bc = PressureBC::Mixed;
    else if (flags.pressure_bc == "dirichlet") c.pressure_bc = PressureBC::Dirichlet;
    else throw std::invalid_argument("--pressure-bc must be neumann, mixed or dirichlet");
  }
  validate_config(c);
  return c;
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  return out;
}

Solution dispatch_solve(const std::string& problem, const Mesh& mesh, const ProblemData& data) {
  if (problem == "stokes") return solve_stokes(mesh, data);
  if (problem == "pp") return solve_pp(mesh, data);
  return solve_es(mesh, data);
}

void write_fit_csv(const std::string& dir, const std::string& name,
                   const std::vector<std::pair<std::string, SlopeFit>>& fits) {
  std::ofstream out = open_csv(dir, name);
  out << "column,slope,intercept,window_lo,window_hi\n";
  for (const auto& [column, fit] : fits) {
    if (fit.degenerate) {
      out << column << ",nan,nan,0,0\n";
      std::cout << "fit " << column << ": degenerate (empty window)\n";
    } else {
      out << column << "," << fit.slope << "," << fit.intercept << "," << fit.window_lo << ","
          << fit.window_hi << "\n";
      std::cout << "fit " << column << ": slope " << fit.slope << " over [" << fit.window_lo
                << ", " << fit.window_hi << "] (" << fit.n_used << " points)\n";
    }
  }
}

int run_solve(const CommonFlags& flags) {
  const RunConfig c = load_with_overrides(flags);
  const Mesh mesh = build_structured(c.nx, c.ny, c.rect);
  const ProblemData data = problem_data(c);
  validate_data(mesh, data);

  const Solution sol = dispatch_solve(c.problem, mesh, data);

  std::filesystem::create_directories(c.out_dir);
  write_vtk_fields(mesh, {{"velocity", &sol.velocity}, {"pressure", &sol.pressure}},
                   c.out_dir + "/solution.vtk");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  ErrorReport eu{nan, nan, nan, nan}, ep{nan, nan, nan, nan};
  if (c.has_exact_u()) {
    eu = error_norm(sol.velocity, exact_velocity(c), exact_velocity_jacobian(c), mesh);
  }
  if (c.has_exact_p()) {
    ep = error_norm(sol.pressure, exact_pressure(c), exact_pressure_gradient(c), mesh);
  }

  std::ofstream out = open_csv(c.out_dir, "summary.csv");
  out << "problem,eps,residual,err_u_l2,err_u_h1semi,err_p_l2,err_p_h1semi\n";
  out << c.problem << "," << c.eps << "," << sol.residual_norm << "," << eu.l2 << ","
      << eu.h1_semi << "," << ep.l2 << "," << ep.h1_semi << "\n";

  std::cout << "solved " << c.problem << " on " << c.nx << "x" << c.ny
            << " (residual " << sol.residual_norm << ")\n";
  if (c.has_exact_u()) std::cout << "err_u: L2 " << eu.l2 << ", H1 " << eu.h1 << "\n";
  if (c.has_exact_p()) std::cout << "err_p: L2 " << ep.l2 << ", H1 " << ep.h1 << "\n";
  return 0;
}

struct SweepRow {
  double eps;
  double err_u_l2, err_u_h1semi, err_p_l2, err_p_h1semi;
};

SweepRow sweep_row(const Discretization& disc, const ProblemData& data, const Solution& ref,
                   bool stokes_reference, double eps) {
  ProblemData at_eps = data;
  at_eps.eps = eps;
  const Solution es = solve_es(disc, at_eps);
  const Mesh& mesh = *disc.mesh;
  const ErrorReport du = error_between(es.velocity, ref.velocity, mesh);
  const ErrorReport dp = error_between(es.pressure, ref.pressure, mesh);
  SweepRow row;
  row.eps = eps;
  row.err_u_l2 = du.l2;
  row.err_u_h1semi = du.h1_semi;
  // Against the Stokes reference the pressure is compared modulo constants.
  row.err_p_l2 = stokes_reference ? dp.l2_mean_zero : dp.l2;
  row.err_p_h1semi = dp.h1_semi;
  return row;
}

int run_sweep(const CommonFlags& flags) {
  RunConfig c = load_with_overrides(flags);
  if (flags.reference != "pp" && flags.reference != "stokes") {
    throw std::invalid_argument("--reference must be pp or stokes");
  }
  if (c.eps_grid.empty()) throw std::invalid_argument("sweep needs an eps grid");
  const bool stokes_reference = flags.reference == "stokes";

  const Mesh mesh = build_structured(c.nx, c.ny, c.rect);
  const ProblemData data = problem_data(c);
  validate_data(mesh, data);
  const Discretization disc(mesh, data);
  const Solution ref = stokes_reference ? solve_stokes(disc, data) : solve_pp(disc, data);

  std::vector<SweepRow> rows;
  for (double eps : c.eps_grid) rows.push_back(sweep_row(disc, data, ref, stokes_reference, eps));

  // Discretization floor: redo the comparison at the eps with the smallest
  // velocity error on a 2x-refined mesh and take the per-column drift.
  std::size_t imin = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].err_u_h1semi < rows[imin].err_u_h1semi) imin = i;
  }
  const Mesh fine = build_structured(2 * c.nx, 2 * c.ny, c.rect);
  const Discretization fine_disc(fine, data);
  const Solution fine_ref = stokes_reference ? solve_stokes(fine_disc, data) : solve_pp(fine_disc, data);
  const SweepRow fine_row =
      sweep_row(fine_disc, data, fine_ref, stokes_reference, rows[imin].eps);
  const double base = kNoiseRel * (field_norm(ref.velocity, mesh).h1 + 1.0);
  const auto floor_of = [&](double coarse, double fine_val) {
    return std::max(base, std::abs(coarse - fine_val));
  };
  const double floor_u_l2 = floor_of(rows[imin].err_u_l2, fine_row.err_u_l2);
  const double floor_u_h1 = floor_of(rows[imin].err_u_h1semi, fine_row.err_u_h1semi);
  const double floor_p_l2 = floor_of(rows[imin].err_p_l2, fine_row.err_p_l2);
  const double floor_p_h1 = floor_of(rows[imin].err_p_h1semi, fine_row.err_p_h1semi);

  std::ofstream out = open_csv(c.out_dir, "sweep.csv");
  out << "eps,err_u_l2,err_u_h1semi,err_p_l2,err_p_h1semi,reference\n";
  for (const SweepRow& r : rows) {
    out << r.eps << "," << r.err_u_l2 << "," << r.err_u_h1semi << "," << r.err_p_l2 << ","
        << r.err_p_h1semi << "," << flags.reference << "\n";
  }

  auto column = [&](double SweepRow::*member) {
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow& r : rows) pts.emplace_back(r.eps, r.*member);
    return pts;
  };
  write_fit_csv(c.out_dir, "sweep_fit.csv",
                {{"err_u_l2", fit_slope(column(&SweepRow::err_u_l2), floor_u_l2)},
                 {"err_u_h1semi", fit_slope(column(&SweepRow::err_u_h1semi), floor_u_h1)},
                 {"err_p_l2", fit_slope(column(&SweepRow::err_p_l2), floor_p_l2)},
                 {"err_p_h1semi", fit_slope(column(&SweepRow::err_p_h1semi), floor_p_h1)}});
  return 0;
}

int run_mms(const CommonFlags& flags) {
  const RunConfig c = load_with_overrides(flags);
  if (!c.has_exact_u() || !c.has_exact_p()) {
    throw std::invalid_argument("mms needs data.exact_u and data.exact_p");
  }
  const VectorFn uex = exact_velocity(c);
  const VectorJacFn ujac = exact_velocity_jacobian(c);
  const ScalarFn pex = exact_pressure(c);
  const ScalarGradFn pgrad = exact_pressure_gradient(c);

  struct Row {
    int n;
    double h;
    ErrorReport eu, ep;
  };
  std::vector<Row> rows;
  for (int n : c.mms_levels) {
    const Mesh mesh = build_structured(n, n, c.rect);
    const ProblemData data = problem_data(c);
    validate_data(mesh, data);
    const Solution sol = dispatch_solve(c.problem, mesh, data);
    Row row;
    row.n = n;
    row.h = std::max((c.rect[2] - c.rect[0]) / n, (c.rect[3] - c.rect[1]) / n);
    row.eu = error_norm(sol.velocity, uex, ujac, mesh);
    ErrorReport ep = error_norm(sol.pressure, pex, pgrad, mesh);
    // Neumann-regime pressure is determined modulo constants.
    if (c.pressure_bc == PressureBC::Neumann) ep.l2 = ep.l2_mean_zero;
    row.ep = ep;
    rows.push_back(row);
  }

  std::ofstream out = open_csv(c.out_dir, "mms.csv");
  out << "n,h,err_u_l2,err_u_h1semi,err_p_l2,err_p_h1semi\n";
  for (const Row& r : rows) {
    out << r.n << "," << r.h << "," << r.eu.l2 << "," << r.eu.h1_semi << "," << r.ep.l2 << ","
        << r.ep.h1_semi << "\n";
  }

  auto column = [&](auto getter) {
    std::vector<std::pair<double, double>> pts;
    for (const Row& r : rows) pts.emplace_back(r.h, getter(r));
    return pts;
  };
  write_fit_csv(c.out_dir, "mms_fit.csv",
                {{"err_u_l2", fit_slope(column([](const Row& r) { return r.eu.l2; }), kNoiseRel)},
                 {"err_u_h1semi", fit_slope(column([](const Row& r) { return r.eu.h1_semi; }), kNoiseRel)},
                 {"err_p_l2", fit_slope(column([](const Row& r) { return r.ep.l2; }), kNoiseRel)},
                 {"err_p_h1semi", fit_slope(column([](const Row& r) { return r.ep.h1_semi; }), kNoiseRel)}});
  return 0;
}

int run_asymptotics(const CommonFlags& flags) {
  const RunConfig c = load_with_overrides(flags);
  if (c.eps_grid.empty()) throw std::invalid_argument("asymptotics needs an eps grid");
  const int k = c.expansion_order;

  const Mesh mesh = build_structured(c.nx, c.ny, c.rect);
  const ProblemData data = problem_data(c);
  validate_data(mesh, data);
  const Discretization disc(mesh, data);
  const Solution pp = solve_pp(disc, data);
  const std::vector<ExpansionTerm> terms = expansion_terms(disc, data, pp, k);
  const std::vector<RemainderRow> rows = remainder_curve(disc, data, pp, terms, c.eps_grid);

  std::ofstream out = open_csv(c.out_dir, "asymptotics.csv");
  out << "eps,rem_u_h1,rem_p_h1,k\n";
  for (const RemainderRow& r : rows) {
    out << r.eps << "," << r.rem_u_h1 << "," << r.rem_p_h1 << "," << k << "\n";
  }

  double scale = field_norm(pp.velocity, mesh).h1 + 1.0;
  for (const ExpansionTerm& t : terms) scale += field_norm(t.velocity, mesh).h1;
  const double floor = kNoiseRel * scale;
  auto column = [&](double RemainderRow::*member) {
    std::vector<std::pair<double, double>> pts;
    for (const RemainderRow& r : rows) pts.emplace_back(r.eps, r.*member);
    return pts;
  };
  write_fit_csv(c.out_dir, "asymptotics_fit.csv",
                {{"rem_u_h1", fit_slope(column(&RemainderRow::rem_u_h1), floor)},
                 {"rem_p_h1", fit_slope(column(&RemainderRow::rem_p_h1), floor)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes / pressure-Poisson / eps-Stokes finite element laboratory"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem at one eps");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "eps sweep with error tables and slope fits");
  CLI::App* mms_cmd = app.add_subcommand("mms", "mesh-refinement convergence study");
  CLI::App* asym_cmd = app.add_subcommand("asymptotics", "remainder curves of the 1/eps expansion");
  for (CLI::App* cmd : {solve_cmd, sweep_cmd, mms_cmd, asym_cmd}) add_common(cmd, &flags);
  sweep_cmd->add_option("--reference", flags.reference, "pp | stokes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(flags);
    if (sweep_cmd->parsed()) return run_sweep(flags);
    if (mms_cmd->parsed()) return run_mms(flags);
    return run_asymptotics(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
