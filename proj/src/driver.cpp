#include "poro/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/SparseLU>

#include "poro/quadrature.hpp"

namespace poro {

void CaseSpec::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3");
  if (n < 1) throw ConfigError("mesh subdivisions must be at least 1");
  if (problem == ProblemKind::layered && dim != 2) throw ConfigError("the layered problem is two-dimensional");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (steps < 1) throw ConfigError("at least one time step is required");
  if (!(rho_scale >= 0.0)) throw ConfigError("rho scale must be non-negative");
  outer.validate();
  inner.validate();
}

int MarchResult::max_iterations() const {
  int m = 0;
  for (const auto& s : steps) m = std::max(m, s.report.iterations);
  return m;
}

Problem build_problem(const CaseSpec& spec) {
  spec.validate();
  Problem pb;
  pb.mesh = build_structured_simplicial(spec.n, spec.dim);
  pb.h = max_diameter(pb.mesh);
  if (spec.problem == ProblemKind::layered) {
    LayeredSetup setup;
    setup.dt = spec.dt;
    pb.scenario = layered_scenario();
    pb.params = layered_params(pb.mesh, setup);
  } else {
    const Material& m = spec.material;
    pb.exact = spec.dim == 2 ? poro_2d_solution(m) : poro_3d_solution(m);
    pb.scenario = manufactured_scenario(*pb.exact, spec.scenario);
    pb.params = PhysicalParams::uniform(pb.mesh.n_elements(), m.mu, m.lambda, m.alpha, m.c0, m.kappa, spec.dt);
  }
  pb.dofs = dirichlet_constraints(pb.mesh, pb.scenario, 0.0);
  pb.blocks = assemble_blocks(pb.mesh, pb.dofs, pb.params);
  pb.mode = pb.scenario.pure_displacement_dirichlet(pb.mesh) ? RegularizationMode::pure_dbc
                                                             : RegularizationMode::mixed;
  pb.reg = build_regularizer(pb.blocks.Mdil, pb.mode, spec.rho_scale);
  return pb;
}

double h1_seminorm_error(const Mesh& mesh, const DofMap& dofs, const Vector& u_total,
                         const ManufacturedSolution& exact, double t) {
  const QuadratureRule rule = simplex_rule(mesh.dim, mesh.dim == 2 ? 4 : 5);
  double sum = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    auto geom = element_geometry(mesh, k);
    std::array<int, 4> signs{1, 1, 1, 1};
    for (int i = 0; i <= mesh.dim; ++i) signs[i] = mesh.facet_orientation(k, i);
    BrLocalBasis basis(geom, signs);
    auto udofs = dofs.element_disp_dofs(mesh, k);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Mat3 g = Mat3::Zero();
      for (int a = 0; a < basis.size(); ++a) g += u_total[udofs[a]] * basis.gradient(a, rule.points[q]);
      Mat3 diff = g - exact.grad_u(geom.point(rule.points[q]), t);
      sum += rule.weights[q] * geom.volume * diff.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double interior_pressure_error(const Mesh& mesh, const Vector& p_total, const ManufacturedSolution& exact, double t) {
  double sum = 0.0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    auto geom = element_geometry(mesh, k);
    double e = p_total[k] - exact.p(geom.centroid, t);
    sum += geom.volume * e * e;
  }
  return std::sqrt(sum);
}

namespace {

class StepSolver {
 public:
  StepSolver(const CaseSpec& spec, const Problem& pb) : spec_(spec) {
    if (spec.solver == SolverKind::direct) {
      Eigen::SparseMatrix<double, Eigen::ColMajor, int> k2 = build_two_field(pb.blocks);
      lu_.compute(k2);
      if (lu_.info() != Eigen::Success) throw FactorizationError("sparse LU of the two-field matrix failed");
      n_u_ = pb.blocks.n_u();
      return;
    }
    system_ = std::make_unique<ThreeFieldSystem>(pb.blocks, pb.reg);
    auto kind = spec.solver == SolverKind::minres ? PreconditionerKind::diagonal : PreconditionerKind::triangular;
    precond_ = std::make_unique<BlockPreconditioner>(*system_, kind, spec.inner);
  }

  // Returns (u, p) on the free dofs.
  std::pair<Vector, Vector> solve(const LoadVectors& loads, SolveReport& rep) {
    if (spec_.solver == SolverKind::direct) {
      auto start = std::chrono::steady_clock::now();
      Vector rhs = two_field_rhs(loads);
      Vector x = lu_.solve(rhs);
      rep.converged = lu_.info() == Eigen::Success;
      rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return {x.head(n_u_), x.tail(x.size() - n_u_)};
    }
    precond_->reset_stats();
    Vector rhs = system_->rhs(loads);
    Vector x;
    rep = spec_.solver == SolverKind::minres ? minres(system_->op(), rhs, precond_->op(), spec_.outer, x)
                                             : gmres(system_->op(), rhs, precond_->op(), spec_.outer, x);
    auto st = precond_->stats();
    rep.inner_a1_iterations = st.a1_iterations;
    rep.inner_middle_iterations = st.middle_iterations;
    return system_->recover(x);
  }

 private:
  const CaseSpec& spec_;
  std::unique_ptr<ThreeFieldSystem> system_;
  std::unique_ptr<BlockPreconditioner> precond_;
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, int>> lu_;
  Eigen::Index n_u_ = 0;
};

} // namespace

MarchResult time_march(const CaseSpec& spec, const Problem& pb) {
  spec.validate();
  MarchResult res;
  DofMap dofs = pb.dofs;
  res.u = Vector::Zero(dofs.disp_total());
  res.p = Vector::Zero(dofs.pres_total());

  std::unique_ptr<StepSolver> solver;
  try {
    solver = std::make_unique<StepSolver>(spec, pb);
  } catch (const std::exception& e) {
    res.converged = false;
    res.failure = e.what();
    return res;
  }

  double accumulated = 0.0;
  for (int n = 1; n <= spec.steps; ++n) {
    const double t = n * spec.dt;
    update_dirichlet_values(pb.mesh, pb.scenario, t, dofs);
    LoadVectors loads = assemble_rhs(pb.mesh, dofs, pb.params, pb.blocks, pb.scenario, t, res.u, res.p);
    StepResult step;
    step.step = n;
    step.t = t;
    Vector u, p;
    try {
      std::tie(u, p) = solver->solve(loads, step.report);
    } catch (const InnerSolverError& e) {
      step.report.converged = false;
      step.report.message = std::string("inner solve failed: ") + e.what();
    }
    if (!step.report.converged) {
      res.converged = false;
      res.failure = "step " + std::to_string(n) + ": " + step.report.message;
      res.steps.push_back(std::move(step));
      break;
    }
    res.u = dofs.expand_displacement(u);
    res.p = dofs.expand_pressure(p);
    if (spec.keep_history) {
      step.u = std::move(u);
      step.p = std::move(p);
    }
    res.steps.push_back(std::move(step));
    if (pb.exact) {
      double e = interior_pressure_error(pb.mesh, res.p, *pb.exact, t);
      accumulated += spec.dt * e * e;
      res.pressure_error = e;
    }
  }
  if (pb.exact && res.converged) {
    res.h1_error = h1_seminorm_error(pb.mesh, dofs, res.u, *pb.exact, res.steps.back().t);
    res.pressure_error_time = std::sqrt(accumulated);
  }
  return res;
}

MarchResult time_march(const CaseSpec& spec) { return time_march(spec, build_problem(spec)); }

std::vector<TableRow> run_experiment(const ExperimentSpec& spec) {
  std::vector<TableRow> rows;
  std::vector<ScenarioKind> scenarios = spec.scenarios;
  std::vector<double> lambdas = spec.lambdas;
  std::vector<double> dts = spec.dts;
  if (spec.problem == ProblemKind::layered) {
    scenarios = {ScenarioKind::mixed};
    lambdas = {0.0};
  }
  for (SolverKind solver : spec.solvers) {
    for (ScenarioKind scenario : scenarios) {
      for (double dt : dts) {
        for (double lambda : lambdas) {
          for (int n : spec.ns) {
            CaseSpec cs;
            cs.problem = spec.problem;
            cs.dim = spec.dim;
            cs.n = n;
            cs.scenario = scenario;
            cs.material.lambda = lambda;
            cs.dt = dt;
            cs.steps = spec.steps;
            cs.solver = solver;
            cs.rho_scale = spec.rho_scale;
            cs.outer = spec.outer;
            cs.inner = spec.inner;

            TableRow row;
            row.solver = to_string(solver);
            row.scenario = spec.problem == ProblemKind::layered ? "layered" : to_string(scenario);
            row.dim = spec.dim;
            row.dt = dt;
            row.lambda = lambda;
            row.n = n;
            auto start = std::chrono::steady_clock::now();
            try {
              Problem pb = build_problem(cs);
              row.elements = pb.mesh.n_elements();
              MarchResult mr = time_march(cs, pb);
              row.iterations = mr.max_iterations();
              row.converged = mr.converged;
              if (!mr.steps.empty()) {
                const auto& r = mr.steps.back().report.residuals;
                row.residual = r.empty() ? 0.0 : r.back();
              }
            } catch (const std::exception&) {
              row.converged = false;
            }
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            rows.push_back(row);
          }
        }
      }
    }
  }
  return rows;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double den = n * sxx - sx * sx;
  if (den == 0.0) throw ConfigError("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

RateTable convergence_study(const CaseSpec& base, const std::vector<int>& ns, double final_time) {
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
  if (base.problem != ProblemKind::manufactured) throw ConfigError("convergence needs a manufactured solution");
  RateTable table;
  std::vector<double> hs, e1, ep;
  for (int n : ns) {
    CaseSpec cs = base;
    cs.n = n;
    double h = max_diameter(build_structured_simplicial(n, cs.dim));
    cs.steps = static_cast<int>(std::ceil(final_time / (h / 10.0) - 1e-9));
    cs.dt = final_time / cs.steps;
    Problem pb0 = build_problem(cs);
    MarchResult mr = time_march(cs, pb0);
    if (!mr.converged) throw InnerSolverError("convergence run failed at n = " + std::to_string(n) + ": " + mr.failure);
    RateRow row{n, pb0.h, cs.dt, mr.h1_error, mr.pressure_error};
    table.rows.push_back(row);
    hs.push_back(row.h);
    e1.push_back(row.h1_error);
    ep.push_back(row.pressure_error);
  }
  if (hs.size() >= 2) {
    table.h1_slope = least_squares_slope(hs, e1);
    table.pressure_slope = least_squares_slope(hs, ep);
  }
  return table;
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::minres:
      return "minres";
    case SolverKind::gmres:
      return "gmres";
    default:
      return "direct";
  }
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "minres") return SolverKind::minres;
  if (s == "gmres") return SolverKind::gmres;
  if (s == "direct") return SolverKind::direct;
  throw ConfigError("unknown solver '" + s + "' (expected minres, gmres or direct)");
}

ScenarioKind scenario_from_string(const std::string& s) {
  if (s == "I" || s == "1" || s == "dirichlet") return ScenarioKind::pure_dirichlet;
  if (s == "II" || s == "2" || s == "mixed") return ScenarioKind::mixed;
  throw ConfigError("unknown scenario '" + s + "' (expected I or II)");
}

} // namespace poro
