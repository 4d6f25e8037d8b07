#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poro/diagnostics.hpp"
#include "poro/driver.hpp"
#include "poro/io.hpp"

using namespace poro;

namespace {

struct Options {
  std::string problem = "manufactured";
  int dim = 2;
  std::vector<int> ns;
  std::vector<std::string> scenarios;
  std::vector<double> lambdas;
  std::vector<double> dts;
  std::vector<std::string> solvers;
  std::vector<double> eps_list;
  int steps = 1;
  double final_time = 0.1;
  double rho_scale = 0.1;
  double ic_droptol = 1e-3;
  double inner_tol = 1e-12;
  double tol = 1e-8;
  int max_iterations = 1000;
  std::string out;
  std::string residuals;
  bool timings = false;
};

template <class T>
T first_or(const std::vector<T>& v, T fallback) {
  return v.empty() ? fallback : v.front();
}

template <class T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> fallback) {
  return v.empty() ? fallback : v;
}

ProblemKind problem_kind(const std::string& s) {
  if (s == "manufactured") return ProblemKind::manufactured;
  if (s == "layered") return ProblemKind::layered;
  throw ConfigError("unknown problem '" + s + "' (expected manufactured or layered)");
}

CaseSpec case_from(const Options& o) {
  CaseSpec cs;
  cs.problem = problem_kind(o.problem);
  cs.dim = o.dim;
  cs.n = first_or(o.ns, 8);
  cs.scenario = scenario_from_string(first_or<std::string>(o.scenarios, "I"));
  cs.material.lambda = first_or(o.lambdas, 1.0);
  cs.dt = first_or(o.dts, cs.problem == ProblemKind::layered ? 0.005 : 1e-3);
  cs.steps = o.steps;
  cs.solver = solver_from_string(first_or<std::string>(o.solvers, "gmres"));
  cs.rho_scale = o.rho_scale;
  cs.inner.droptol = o.ic_droptol;
  cs.inner.tol = o.inner_tol;
  cs.outer.tol = o.tol;
  cs.outer.max_iterations = o.max_iterations;
  return cs;
}

int run_solve(const Options& o) {
  CaseSpec cs = case_from(o);
  Problem pb = build_problem(cs);
  MarchResult mr = time_march(cs, pb);
  std::printf("elements %d  displacement dofs %d  pressure dofs %d\n", pb.mesh.n_elements(),
              pb.dofs.n_disp_free(), pb.dofs.n_pres_free());
  for (const auto& s : mr.steps) {
    std::printf("step %d  t=%.6g  iterations %d  residual %.3e  true %.3e  inner %ld/%ld  %s\n", s.step, s.t,
                s.report.iterations, s.report.residuals.empty() ? 0.0 : s.report.residuals.back(),
                s.report.true_relative_residual, s.report.inner_a1_iterations, s.report.inner_middle_iterations,
                s.report.converged ? "converged" : "FAILED");
  }
  if (pb.exact && mr.converged) {
    std::printf("H1 error %.6e  pressure error %.6e\n", mr.h1_error, mr.pressure_error);
  }
  if (!o.out.empty()) write_vtk(pb.mesh, pb.dofs, mr.u, mr.p, o.out);
  if (!o.residuals.empty() && !mr.steps.empty()) write_residual_csv(mr.steps.back().report, o.residuals);
  if (!mr.converged) {
    std::fprintf(stderr, "solve failed: %s\n", mr.failure.c_str());
    return 2;
  }
  return 0;
}

int run_experiment_cmd(const Options& o) {
  ExperimentSpec es;
  es.problem = problem_kind(o.problem);
  es.dim = o.dim;
  es.ns = or_default(o.ns, es.problem == ProblemKind::layered ? std::vector<int>{16, 32} : std::vector<int>{21, 43});
  es.scenarios.clear();
  for (const auto& s : or_default<std::string>(o.scenarios, {"I", "II"})) es.scenarios.push_back(scenario_from_string(s));
  es.lambdas = or_default(o.lambdas, {1.0, 1e4});
  es.dts = or_default(o.dts, es.problem == ProblemKind::layered ? std::vector<double>{0.005} : std::vector<double>{1e-3, 1e-6});
  es.solvers.clear();
  for (const auto& s : or_default<std::string>(o.solvers, {"minres", "gmres"})) es.solvers.push_back(solver_from_string(s));
  es.steps = o.steps;
  es.rho_scale = o.rho_scale;
  es.inner.droptol = o.ic_droptol;
  es.inner.tol = o.inner_tol;
  es.outer.tol = o.tol;
  es.outer.max_iterations = o.max_iterations;

  auto rows = run_experiment(es);
  std::printf("%-7s %-8s %-8s %-8s %5s %7s %6s %s\n", "solver", "scenario", "dt", "lambda", "n", "N", "iters", "status");
  bool ok = true;
  for (const auto& r : rows) {
    std::printf("%-7s %-8s %-8.1e %-8.1e %5d %7d %6d %s\n", r.solver.c_str(), r.scenario.c_str(), r.dt, r.lambda, r.n,
                r.elements, r.iterations, r.converged ? "ok" : "FAILED");
    ok = ok && r.converged;
  }
  if (!o.out.empty()) write_table_csv(rows, o.out, o.timings);
  return ok ? 0 : 2;
}

int run_eig(const Options& o) {
  CaseSpec cs = case_from(o);
  if (o.ns.empty()) cs.n = 4;
  Problem pb = build_problem(cs);
  auto reports = dense_schur_eigs(pb.blocks, pb.reg, or_default(o.eps_list, {1e-4, 1e-8}),
                                  to_string(cs.scenario), pb.h);
  auto rank = rank_nullspace(pb.blocks.Bc);
  std::printf("beta %.6f  C_Korn %.6f  null(Bc^T) dim %d  sigma_min/sigma_max %.3e\n", reports.front().beta,
              reports.front().c_korn, rank.null_dim, rank.sigma_ratio);
  for (const auto& r : reports) {
    std::printf("eps %.1e  rho %.3e  theta in [%.6e, %.6e]\n", r.eps, r.rho, r.min, r.max);
  }
  if (!o.out.empty()) write_eigen_csv(reports, o.out);
  return 0;
}

int run_convergence(const Options& o) {
  CaseSpec cs = case_from(o);
  auto ns = or_default(o.ns, {8, 16, 32});
  RateTable t = convergence_study(cs, ns, o.final_time);
  std::printf("%5s %10s %10s %12s %12s\n", "n", "h", "dt", "H1 error", "p error");
  for (const auto& r : t.rows) {
    std::printf("%5d %10.4e %10.4e %12.5e %12.5e\n", r.n, r.h, r.dt, r.h1_error, r.pressure_error);
  }
  std::printf("slopes: H1 %.3f  pressure %.3f\n", t.h1_slope, t.pressure_slope);
  if (!o.out.empty()) write_rate_csv(t, o.out);
  return 0;
}

int run_export_mesh(const Options& o) {
  Mesh mesh = build_structured_simplicial(first_or(o.ns, 8), o.dim);
  std::printf("elements %d  vertices %d  facets %d  boundary facets %d\n", mesh.n_elements(), mesh.n_vertices(),
              mesh.n_facets(), mesh.n_boundary_facets());
  if (!o.out.empty()) write_mesh_vtk(mesh, o.out);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biot poroelasticity solver with block-preconditioned Krylov methods"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file of option defaults");

  Options o;
  app.add_option("--problem", o.problem, "manufactured or layered")->capture_default_str();
  app.add_option("--dim", o.dim, "spatial dimension (2 or 3)")->capture_default_str();
  app.add_option("--n", o.ns, "subdivisions per axis (several for sweeps)");
  app.add_option("--scenario", o.scenarios, "I (pure Dirichlet) or II (mixed)");
  app.add_option("--lambda", o.lambdas, "Lame lambda");
  app.add_option("--dt", o.dts, "time step");
  app.add_option("--solver", o.solvers, "minres, gmres or direct");
  app.add_option("--eps", o.eps_list, "eps values for eig");
  app.add_option("--steps", o.steps, "time steps")->capture_default_str();
  app.add_option("--final-time", o.final_time, "end time of convergence runs")->capture_default_str();
  app.add_option("--rho-scale", o.rho_scale, "rho as a multiple of the smallest element volume")->capture_default_str();
  app.add_option("--ic-droptol", o.ic_droptol, "incomplete Cholesky drop tolerance")->capture_default_str();
  app.add_option("--inner-tol", o.inner_tol, "inner PCG relative tolerance")->capture_default_str();
  app.add_option("--tol", o.tol, "outer relative tolerance")->capture_default_str();
  app.add_option("--maxit", o.max_iterations, "outer iteration limit")->capture_default_str();
  app.add_option("--out", o.out, "output file (VTK or CSV depending on the command)");
  app.add_option("--residuals", o.residuals, "residual history CSV (solve)");
  app.add_flag("--timings", o.timings, "add a seconds column to experiment CSV");

  auto* solve = app.add_subcommand("solve", "time-march one case");
  auto* experiment = app.add_subcommand("experiment", "iteration-count table sweep");
  auto* eig = app.add_subcommand("eig", "dense Schur complement spectra");
  auto* convergence = app.add_subcommand("convergence", "error rates under refinement");
  auto* export_mesh = app.add_subcommand("export-mesh", "write the structured mesh as VTK");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(o);
    if (*experiment) return run_experiment_cmd(o);
    if (*eig) return run_eig(o);
    if (*convergence) return run_convergence(o);
    if (*export_mesh) return run_export_mesh(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
