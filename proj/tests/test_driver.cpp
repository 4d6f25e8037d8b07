#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "poro/io.hpp"
#include "test_util.hpp"

using namespace poro;

namespace {

void zero_data(Problem& pb) {
  pb.scenario.body_force = [](const Vec3&, double) { return Vec3::Zero().eval(); };
  pb.scenario.source = [](const Vec3&, double) { return 0.0; };
  pb.scenario.displacement = [](const BoundaryPoint&, double) { return Vec3::Zero().eval(); };
  pb.scenario.traction = [](const BoundaryPoint&, double) { return Vec3::Zero().eval(); };
  pb.scenario.pressure = [](const BoundaryPoint&, double) { return 0.0; };
  pb.scenario.flux = [](const BoundaryPoint&, double) { return 0.0; };
  pb.exact.reset();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("zero data gives zero fields") {
  for (auto solver : {SolverKind::minres, SolverKind::gmres, SolverKind::direct}) {
    CaseSpec cs = testutil::manufactured_case(4, ScenarioKind::mixed, 1.0);
    cs.solver = solver;
    cs.steps = 2;
    Problem pb = build_problem(cs);
    zero_data(pb);
    MarchResult r = time_march(cs, pb);
    CHECK(r.converged);
    CHECK(r.u.norm() == 0.0);
    CHECK(r.p.norm() == 0.0);
  }
}

TEST_CASE("iterative steps agree with the direct solve") {
  for (auto kind : {ScenarioKind::pure_dirichlet, ScenarioKind::mixed}) {
    CaseSpec cs = testutil::manufactured_case(6, kind, 1e4);
    cs.steps = 2;
    cs.solver = SolverKind::direct;
    Problem pb = build_problem(cs);
    MarchResult ref = time_march(cs, pb);
    REQUIRE(ref.converged);
    for (auto solver : {SolverKind::minres, SolverKind::gmres}) {
      cs.solver = solver;
      cs.outer.tol = 1e-12;
      MarchResult r = time_march(cs, pb);
      REQUIRE(r.converged);
      CHECK(testutil::rel_diff(r.u, ref.u) <= 1e-8);
      CHECK(testutil::rel_diff(r.p, ref.p) <= 1e-8);
      CHECK(r.h1_error == doctest::Approx(ref.h1_error).epsilon(1e-6));
    }
  }
}

TEST_CASE("iteration counts are steady across time steps") {
  for (auto solver : {SolverKind::minres, SolverKind::gmres}) {
    CaseSpec cs = testutil::manufactured_case(8, ScenarioKind::pure_dirichlet, 1.0);
    cs.solver = solver;
    cs.steps = 5;
    cs.keep_history = true;
    MarchResult r = time_march(cs);
    REQUIRE(r.steps.size() == 5);
    CHECK(r.converged);
    CHECK(std::abs(r.steps.front().report.iterations - r.steps.back().report.iterations) <= 2);
    CHECK(r.steps.back().t == doctest::Approx(5 * cs.dt));
    CHECK(r.steps.back().u.size() > 0);
    int mx = 0;
    for (const auto& s : r.steps) mx = std::max(mx, s.report.iterations);
    CHECK(r.max_iterations() == mx);
  }
}

TEST_CASE("errors against the manufactured solution") {
  CaseSpec cs = testutil::manufactured_case(8, ScenarioKind::pure_dirichlet, 1.0);
  cs.solver = SolverKind::direct;
  Problem pb = build_problem(cs);
  REQUIRE(pb.exact.has_value());
  MarchResult r = time_march(cs, pb);
  CHECK(r.h1_error > 0.0);
  CHECK(r.h1_error < 1e-2);
  CHECK(r.pressure_error_time > 0.0);
  Vector zero_u = Vector::Zero(r.u.size());
  CHECK(h1_seminorm_error(pb.mesh, pb.dofs, zero_u, *pb.exact, cs.dt) > r.h1_error);
}

TEST_CASE("case validation") {
  CaseSpec cs;
  CHECK_NOTHROW(cs.validate());
  cs.n = 0;
  CHECK_THROWS_AS(cs.validate(), ConfigError);
  cs = CaseSpec{};
  cs.dim = 4;
  CHECK_THROWS_AS(cs.validate(), ConfigError);
  cs = CaseSpec{};
  cs.steps = 0;
  CHECK_THROWS_AS(cs.validate(), ConfigError);
  cs = CaseSpec{};
  cs.dt = -1.0;
  CHECK_THROWS_AS(build_problem(cs), ConfigError);
}

TEST_CASE("experiment table round trip") {
  ExperimentSpec es;
  es.ns = {4};
  es.lambdas = {1.0};
  es.dts = {1e-3};
  std::vector<TableRow> rows = run_experiment(es);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.converged);
    CHECK(r.iterations > 0);
    CHECK(r.residual <= es.outer.tol);
    CHECK(r.elements == 32);
  }
  auto dir = std::filesystem::temp_directory_path();
  write_table_csv(rows, dir / "poro_table_a.csv");
  std::vector<TableRow> untimed = rows;
  for (auto& r : untimed) r.seconds = 0.0;
  CHECK(read_table_csv(dir / "poro_table_a.csv") == untimed);
  write_table_csv(rows, dir / "poro_table_t.csv", true);
  CHECK(read_table_csv(dir / "poro_table_t.csv") == rows);
  std::filesystem::remove(dir / "poro_table_t.csv");

  std::vector<TableRow> again = run_experiment(es);
  write_table_csv(again, dir / "poro_table_b.csv");
  CHECK(slurp(dir / "poro_table_a.csv") == slurp(dir / "poro_table_b.csv"));
  CHECK(slurp(dir / "poro_table_a.csv").rfind("solver,scenario,dim,dt,lambda,n,N,iters,residual,converged\n", 0) == 0);
  std::filesystem::remove(dir / "poro_table_a.csv");
  std::filesystem::remove(dir / "poro_table_b.csv");
}

TEST_CASE("VTK output") {
  CaseSpec cs = testutil::manufactured_case(1, ScenarioKind::pure_dirichlet, 1.0);
  cs.solver = SolverKind::direct;
  Problem pb = build_problem(cs);
  MarchResult r = time_march(cs, pb);
  auto path = std::filesystem::temp_directory_path() / "poro_vtk_test.vtk";
  write_vtk(pb.mesh, pb.dofs, r.u, r.p, path);
  std::string s = slurp(path);
  CHECK(s.find("POINTS 4 double") != std::string::npos);
  CHECK(s.find("CELLS 2 8") != std::string::npos);
  CHECK(s.find("CELL_TYPES 2") != std::string::npos);
  CHECK(s.find("POINT_DATA 4") != std::string::npos);
  CHECK(s.find("CELL_DATA 2") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("slope fit") {
  CHECK(least_squares_slope({1.0, 0.5, 0.25}, {2.0, 0.5, 0.125}) == doctest::Approx(2.0));
  CHECK(least_squares_slope({0.1, 0.01}, {3.0, 0.3}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(least_squares_slope({1.0}, {1.0}), ConfigError);
  CHECK_THROWS_AS(least_squares_slope({1.0, 1.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("string conversions") {
  CHECK(solver_from_string("minres") == SolverKind::minres);
  CHECK(solver_from_string("gmres") == SolverKind::gmres);
  CHECK(solver_from_string("direct") == SolverKind::direct);
  CHECK_THROWS_AS(solver_from_string("cg"), ConfigError);
  CHECK(scenario_from_string("I") == ScenarioKind::pure_dirichlet);
  CHECK(scenario_from_string("II") == ScenarioKind::mixed);
  CHECK_THROWS_AS(scenario_from_string("III"), ConfigError);
  for (auto k : {SolverKind::minres, SolverKind::gmres, SolverKind::direct}) CHECK(solver_from_string(to_string(k)) == k);
}

TEST_CASE("layered problem") {
  CaseSpec cs;
  cs.problem = ProblemKind::layered;
  cs.n = 15;
  cs.steps = 2;
  Problem pb = build_problem(cs);
  CHECK_FALSE(pb.exact.has_value());
  CHECK(pb.mode == RegularizationMode::mixed);
  MarchResult r = time_march(cs, pb);
  CHECK(r.converged);
  CHECK(r.u.allFinite());
  CHECK(r.p.norm() > 0.0);
}
