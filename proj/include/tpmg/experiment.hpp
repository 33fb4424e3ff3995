#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpmg/multigrid.hpp"
#include "tpmg/params.hpp"
#include "tpmg/solve_report.hpp"
#include "tpmg/stencil.hpp"

namespace tpmg {

class MemoryCapError : public std::runtime_error {
 public:
  MemoryCapError(const std::string& what, double estimate) : std::runtime_error(what), estimate_bytes(estimate) {}
  double estimate_bytes;
};

enum class SolverKind { kMultigrid, kCG };
enum class RhsKind { kRandom, kManufactured, kFile };
enum class CGPreconditioner { kLine, kIdentity };

std::string to_string(SolverKind s);
SolverKind parse_solver(const std::string& s);
RhsKind parse_rhs(const std::string& s);

struct ExperimentSpec {
  SolverKind solver = SolverKind::kMultigrid;
  int nx = 256;
  int nz = 128;
  double dt = 600.0;
  PhysicalConstants constants;
  double f_omega2 = 1.0;
  double f_lambda2 = 1.0;
  int workers = 1;
  double eps = 1e-5;
  int maxiter = 100;
  double rho = 1.0;
  MGConfig mg;  // policy, smoothing counts, coarse sweeps, l_split; eps/maxiter/rho are overridden
  CGPreconditioner preconditioner = CGPreconditioner::kLine;
  RhsKind rhs = RhsKind::kRandom;
  std::uint64_t seed = 0;
  std::string rhs_file;
  bool flat = false;
  bool deterministic = false;
  std::string output;         // CSV path, empty for none
  std::string dump_solution;  // field dump path, empty for none
  double memory_cap_bytes = 8.0 * 1024 * 1024 * 1024;

  void validate() const;
  ModelParameters parameters() const;
  MGConfig mg_config() const;
};

/// fields x dof x 8 bytes x 1.5
double estimate_memory_bytes(const ExperimentSpec& spec);

struct ExperimentResult {
  ModelParameters params;
  SolveReport report;
  std::map<std::string, std::string> row;  // CSV columns
  /// ||u - u_exact|| / ||u_exact|| for manufactured right-hand sides, else -1.
  double manufactured_error = -1.0;
};

const std::vector<std::string>& csv_columns();

/// Formats a row in csv_columns() order.
std::string format_csv_row(const std::map<std::string, std::string>& row);
/// Appends rows to path, writing the header first if the file is new or
/// empty. Throws if an existing header differs.
void append_csv(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::string>& lines);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// f = A u_exact with u_exact = offset + amplitude cos(pi X1) cos(pi X2) cos(pi s),
/// X = (xi + 1) / 2 and s = sqrt((r - r_0) / H) the graded vertical coordinate.
std::pair<DistributedField, DistributedField> manufactured_rhs(const LevelOperator& op, double offset = 0.0,
                                                               double amplitude = 1.0);

/// Components uniform in [-1, 1], drawn in global order so any decomposition sees the same f.
DistributedField random_rhs(const LevelOperator& op, std::uint64_t seed);

enum class TableKind { kParamSpace, kWeakScaling, kLevels, kRobustness };
TableKind parse_table(const std::string& s);

struct TableBounds {
  int nx_min = 256;
  int nx_max = 1024;
  int base_nx = 256;
  double base_dt = 600.0;
  /// Robustness runs use this resolution.
  int robustness_nx = 512;
  ExperimentSpec base;  // solver settings, workers, rhs, output path
};

struct TableResult {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<ExperimentResult> experiments;
  bool partial = false;
  std::vector<std::string> skipped;
};

const std::vector<std::string>& param_space_columns();

/// The robustness multipliers (f_omega2, f_lambda2).
const std::vector<std::pair<double, double>>& robustness_factors();

TableResult run_table(TableKind which, const TableBounds& bounds);

}  // namespace tpmg
