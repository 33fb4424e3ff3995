#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracle.hpp"
#include "tpmg/experiment.hpp"

using namespace tpmg;

namespace {

ExperimentSpec small(SolverKind solver = SolverKind::kMultigrid) {
  ExperimentSpec s;
  s.solver = solver;
  s.nx = 32;
  s.nz = 16;
  s.dt = 600.0 * 8;
  return s;
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(Manufactured, RecoversExactSolution) {
  for (int P : {1, 4})
    for (auto solver : {SolverKind::kMultigrid, SolverKind::kCG}) {
      ExperimentSpec s;
      s.solver = solver;
      s.nx = 64;
      s.nz = 16;
      s.dt = 600.0 * 4;
      s.eps = 1e-10;
      s.maxiter = 500;
      s.workers = P;
      s.rhs = RhsKind::kManufactured;
      const auto r = run_experiment(s);
      EXPECT_TRUE(r.report.converged);
      EXPECT_LE(r.manufactured_error, 1e-8) << "P=" << P << " solver=" << to_string(solver);
    }
}

TEST(Manufactured, ConstantSolution) {
  const LevelOperator op(PanelGrid(16, 4, 0.01), 1e-2, 1e-1, Decomposition::decompose(16, 1));
  const auto [f, u] = manufactured_rhs(op, 2.0, 0.0);
  const auto& g = op.grid();
  for (int i = 0; i < 16; ++i)
    for (int k = 0; k < 4; ++k)
      EXPECT_NEAR(f.at(i, 3, k), 2.0 * g.column_area(i, 3) * g.mass_profile()[k], 1e-14 * f.at(i, 3, k));
  MGConfig cfg;
  LevelHierarchy h(g, 1e-2, 1e-1, 1, cfg);
  auto sol = op.make_field();
  mg_solve(f, h, cfg, sol);
  for (double v : sol.to_global()) EXPECT_NEAR(v, 2.0, 2.0 * 1e-5);
}

TEST(RandomRhs, IndependentOfDecomposition) {
  const auto a = random_rhs(LevelOperator(PanelGrid(16, 4, 0.01), 1, 1, Decomposition::decompose(16, 1)), 3);
  const auto b = random_rhs(LevelOperator(PanelGrid(16, 4, 0.01), 1, 1, Decomposition::decompose(16, 16)), 3);
  EXPECT_EQ(a.to_global(), b.to_global());
  for (double v : a.to_global()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
  const auto c = random_rhs(LevelOperator(PanelGrid(16, 4, 0.01), 1, 1, Decomposition::decompose(16, 1)), 4);
  EXPECT_NE(a.to_global(), c.to_global());
}

TEST(RunExperiment, DeterministicRows) {
  const auto path = temp_path("tpmg_rows.csv");
  std::filesystem::remove(path);
  auto s = small();
  s.output = path;
  const auto a = run_experiment(s);
  const auto b = run_experiment(s);
  auto strip = [](std::map<std::string, std::string> row) {
    row.erase("wall_time_s");
    row.erase("time_per_iter_s");
    return row;
  };
  EXPECT_EQ(strip(a.row), strip(b.row));
  std::ifstream in(path);
  std::string header, l1, l2, extra;
  std::getline(in, header);
  std::getline(in, l1);
  std::getline(in, l2);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(header.rfind("nx,nz,dof,", 0), 0u);
  EXPECT_EQ(l1.substr(0, 20), l2.substr(0, 20));
  std::filesystem::remove(path);
}

TEST(RunExperiment, CsvHeaderMismatch) {
  const auto path = temp_path("tpmg_bad.csv");
  {
    std::ofstream out(path);
    out << "a,b,c\n";
  }
  auto s = small();
  s.output = path;
  EXPECT_THROW(run_experiment(s), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(RunExperiment, MemoryCap) {
  ExperimentSpec s;
  s.nx = 16384;
  s.nz = 128;
  EXPECT_THROW(run_experiment(s), MemoryCapError);
  s.nx = 256;
  EXPECT_LT(estimate_memory_bytes(s), s.memory_cap_bytes);
}

TEST(RunExperiment, InvalidSpecs) {
  auto s = small();
  s.workers = 8;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small();
  s.nx = 48;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small();
  s.rhs = RhsKind::kFile;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small();
  s.mg.policy = LevelPolicy::kExplicit;
  s.mg.explicit_levels = 12;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  EXPECT_THROW(parse_solver("gmres"), std::invalid_argument);
  EXPECT_THROW(parse_rhs("smooth"), std::invalid_argument);
  EXPECT_THROW(parse_table("table9"), std::invalid_argument);
}

TEST(RunExperiment, FileRightHandSideAndDump) {
  const auto rhs_path = temp_path("tpmg_rhs.bin"), sol_path = temp_path("tpmg_sol.bin");
  auto s = small(SolverKind::kCG);
  const LevelOperator op(PanelGrid(s.nx, s.nz, 0.01), 1, 1, Decomposition::decompose(s.nx, 1));
  write_field_dump(rhs_path, random_rhs(op, 9));
  s.rhs = RhsKind::kFile;
  s.rhs_file = rhs_path;
  s.dump_solution = sol_path;
  const auto from_file = run_experiment(s);
  s.rhs = RhsKind::kRandom;
  s.seed = 9;
  s.dump_solution.clear();
  const auto direct = run_experiment(s);
  EXPECT_EQ(from_file.report.residual_history, direct.report.residual_history);
  EXPECT_EQ(read_field_dump(sol_path).values.size(), static_cast<std::size_t>(s.nx * s.nx * s.nz));
  s.nx = 16;
  s.rhs = RhsKind::kFile;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  std::filesystem::remove(rhs_path);
  std::filesystem::remove(sol_path);
}

TEST(RunTable, ParameterSpace) {
  TableBounds b;
  const auto t = run_table(TableKind::kParamSpace, b);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.header, param_space_columns());
  EXPECT_EQ(t.rows[0][0], "256");
  EXPECT_EQ(t.rows[0][3], "39.1");
  EXPECT_EQ(t.rows[1][4], "300");
  EXPECT_EQ(t.rows[2][4], "150");
  b.nx_max = 16384;
  EXPECT_EQ(run_table(TableKind::kParamSpace, b).rows.size(), 7u);
  b.nx_min = 100;
  EXPECT_THROW(run_table(TableKind::kParamSpace, b), std::invalid_argument);
}

TEST(RunTable, WeakScalingAndSkips) {
  TableBounds b;
  b.base = small();
  b.base.nz = 8;
  b.nx_min = 16;
  b.nx_max = 64;
  b.base_nx = 16;
  b.base_dt = 600.0 * 16;
  const auto t = run_table(TableKind::kWeakScaling, b);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& e : t.experiments) EXPECT_TRUE(e.report.converged);
  EXPECT_FALSE(t.partial);

  b.base.memory_cap_bytes = estimate_memory_bytes(b.base) * 1.5;
  b.base.nx = 32;
  const auto capped = run_table(TableKind::kWeakScaling, b);
  EXPECT_TRUE(capped.partial);
  EXPECT_EQ(capped.rows.size(), 2u);
  EXPECT_EQ(capped.skipped.size(), 1u);
}

TEST(RunTable, LevelsAndRobustnessShapes) {
  TableBounds b;
  b.base = small();
  b.base.nz = 8;
  b.nx_min = b.nx_max = 32;
  b.base_nx = 32;
  b.base_dt = 600.0 * 8;
  const auto levels = run_table(TableKind::kLevels, b);
  ASSERT_EQ(levels.rows.size(), 3u);
  b.robustness_nx = 32;
  b.base.maxiter = 400;
  const auto robust = run_table(TableKind::kRobustness, b);
  ASSERT_EQ(robust.rows.size(), 20u);
  EXPECT_EQ(robust.experiments[3].row.at("solver"), "cg");
  EXPECT_EQ(robust.experiments[2].row.at("policy"), "very_shallow");
}
