#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poro/krylov.hpp"
#include "poro/manufactured.hpp"
#include "poro/precond.hpp"
#include "poro/system.hpp"

namespace poro {

// minres uses the block diagonal preconditioner, gmres the triangular one;
// direct factorizes the two-field matrix.
enum class SolverKind { minres, gmres, direct };

enum class ProblemKind { manufactured, layered };

struct CaseSpec {
  ProblemKind problem = ProblemKind::manufactured;
  int dim = 2;
  int n = 8;
  ScenarioKind scenario = ScenarioKind::pure_dirichlet;
  Material material;
  double dt = 1e-3;
  int steps = 1;
  SolverKind solver = SolverKind::gmres;
  double rho_scale = 0.1;
  SolverConfig outer;
  InnerSolverConfig inner;
  bool keep_history = false;

  void validate() const;
};

// Everything that does not change between time steps.
struct Problem {
  Mesh mesh;
  ScenarioSpec scenario;
  PhysicalParams params;
  DofMap dofs;
  AssembledBlocks blocks;
  RegularizationMode mode = RegularizationMode::pure_dbc;
  RegularizationSpec reg;
  std::optional<ManufacturedSolution> exact;
  double h = 0.0;
};

Problem build_problem(const CaseSpec& spec);

struct StepResult {
  int step = 0;
  double t = 0.0;
  SolveReport report;
  Vector u;  // free dofs, kept when CaseSpec::keep_history is set
  Vector p;
};

struct MarchResult {
  std::vector<StepResult> steps;
  Vector u;  // all displacement dofs at the last completed step
  Vector p;  // all pressure dofs
  bool converged = true;
  std::string failure;
  // Against the exact solution, when there is one.
  double h1_error = 0.0;       // |grad(u - u_h)| at the final step
  double pressure_error = 0.0; // final-step interior pressure error
  double pressure_error_time = 0.0;  // sqrt(sum_n dt |p - p_h|^2)

  int max_iterations() const;
};

MarchResult time_march(const CaseSpec& spec, const Problem& problem);
MarchResult time_march(const CaseSpec& spec);

// |grad(u - u_h)|_{L2} over the mesh.
double h1_seminorm_error(const Mesh& mesh, const DofMap& dofs, const Vector& u_total,
                         const ManufacturedSolution& exact, double t);
// sqrt(sum_K |K| (p_K - p(x_K))^2) over interior values.
double interior_pressure_error(const Mesh& mesh, const Vector& p_total, const ManufacturedSolution& exact, double t);

struct TableRow {
  std::string solver;
  std::string scenario;
  int dim = 2;
  double dt = 0.0;
  double lambda = 0.0;
  int n = 0;
  int elements = 0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double seconds = 0.0;

  bool operator==(const TableRow&) const = default;
};

struct ExperimentSpec {
  ProblemKind problem = ProblemKind::manufactured;
  int dim = 2;
  std::vector<int> ns = {21, 43};
  std::vector<ScenarioKind> scenarios = {ScenarioKind::pure_dirichlet, ScenarioKind::mixed};
  std::vector<double> lambdas = {1.0, 1e4};
  std::vector<double> dts = {1e-3, 1e-6};
  std::vector<SolverKind> solvers = {SolverKind::minres, SolverKind::gmres};
  int steps = 1;
  double rho_scale = 0.1;
  SolverConfig outer;
  InnerSolverConfig inner;
};

// One row per (solver, scenario, dt, lambda, mesh); failed cells are kept
// with converged = false. The iteration count is the maximum over steps.
std::vector<TableRow> run_experiment(const ExperimentSpec& spec);

struct RateRow {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double h1_error = 0.0;
  double pressure_error = 0.0;
};

struct RateTable {
  std::vector<RateRow> rows;
  double h1_slope = 0.0;
  double pressure_slope = 0.0;
};

// Runs each mesh to final_time with dt <= h / 10 and fits log(error)
// against log(h).
RateTable convergence_study(const CaseSpec& base, const std::vector<int>& ns, double final_time = 0.1);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

const char* to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& s);
ScenarioKind scenario_from_string(const std::string& s);

} // namespace poro
