#include "tpmg/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "tpmg/krylov.hpp"

namespace tpmg {

namespace {

std::string num(double x, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

}  // namespace

std::string to_string(SolverKind s) { return s == SolverKind::kMultigrid ? "mg" : "cg"; }

SolverKind parse_solver(const std::string& s) {
  if (s == "mg") return SolverKind::kMultigrid;
  if (s == "cg") return SolverKind::kCG;
  throw std::invalid_argument("unknown solver '" + s + "' (expected mg or cg)");
}

RhsKind parse_rhs(const std::string& s) {
  if (s == "random") return RhsKind::kRandom;
  if (s == "manufactured") return RhsKind::kManufactured;
  if (s == "file") return RhsKind::kFile;
  throw std::invalid_argument("unknown rhs '" + s + "' (expected random, manufactured or file)");
}

TableKind parse_table(const std::string& s) {
  if (s == "param_space") return TableKind::kParamSpace;
  if (s == "weak_scaling") return TableKind::kWeakScaling;
  if (s == "levels") return TableKind::kLevels;
  if (s == "robustness") return TableKind::kRobustness;
  throw std::invalid_argument("unknown table '" + s + "'");
}

void ExperimentSpec::validate() const {
  (void)parameters();
  Decomposition::decompose(nx, workers);
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("tolerance must lie in (0, 1)");
  if (maxiter < 0) throw std::invalid_argument("maxiter must be non-negative");
  if (!(rho > 0 && rho < 2)) throw std::invalid_argument("overrelaxation parameter must lie in (0, 2)");
  if (solver == SolverKind::kMultigrid) {
    const MGConfig cfg = mg_config();
    cfg.validate();
    level_count(nx, workers, cfg);
  }
  if (rhs == RhsKind::kFile && rhs_file.empty()) throw std::invalid_argument("rhs=file needs a file path");
}

ModelParameters ExperimentSpec::parameters() const {
  return derive_parameters(nx, nz, dt, constants, f_omega2, f_lambda2);
}

MGConfig ExperimentSpec::mg_config() const {
  MGConfig cfg = mg;
  cfg.eps = eps;
  cfg.maxiter = maxiter;
  cfg.rho = rho;
  cfg.reduction = deterministic ? Reduction::kDeterministic : Reduction::kPerWorker;
  return cfg;
}

double estimate_memory_bytes(const ExperimentSpec& spec) {
  const double dof = static_cast<double>(spec.nx) * spec.nx * spec.nz;
  // mg: u, f, r on every level (4/3 of the fine level) plus rhs and solution;
  // cg: f, u, r, z, p, q.
  const double fields = spec.solver == SolverKind::kMultigrid ? 3.0 * 4.0 / 3.0 + 2.0 : 6.0;
  const double extra = spec.rhs == RhsKind::kManufactured ? 1.0 : 0.0;
  return (fields + extra) * dof * 8.0 * 1.5;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "nx",     "nz",      "dof",        "dt",         "omega2",    "lambda2",
      "f_omega2", "f_lambda2", "solver", "policy",     "workers",   "iterations",
      "converged", "final_rel_residual", "wall_time_s", "time_per_iter_s", "seed"};
  return cols;
}

std::string format_csv_row(const std::map<std::string, std::string>& row) {
  std::string line;
  for (const auto& c : csv_columns()) {
    if (!line.empty()) line += ',';
    auto it = row.find(c);
    line += it == row.end() ? "" : it->second;
  }
  return line;
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) {
    if (!s.empty()) s += ',';
    s += x;
  }
  return s;
}

}  // namespace

void append_csv(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::string>& lines) {
  const std::string head = join(header);
  bool need_header = true;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (first != head) throw std::runtime_error(path + " has a different CSV header");
    need_header = false;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (need_header) out << head << '\n';
  for (const auto& l : lines) out << l << '\n';
}

std::pair<DistributedField, DistributedField> manufactured_rhs(const LevelOperator& op, double offset,
                                                               double amplitude) {
  const PanelGrid& g = op.grid();
  DistributedField u = op.make_field();
  const double r0 = g.levels().front();
  const double H = g.H();
  const auto& d = op.decomposition();
  const int n = d.nx_local();
  for (int w = 0; w < u.workers(); ++w)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x1 = 0.5 * (g.xi_center(d.i_offset(w) + i) + 1.0);
        const double x2 = 0.5 * (g.xi_center(d.j_offset(w) + j) + 1.0);
        const double horiz = std::cos(std::numbers::pi * x1) * std::cos(std::numbers::pi * x2);
        for (int k = 0; k < g.nz(); ++k) {
          const double s = std::sqrt((g.r_center(k) - r0) / H);
          u.part(w)(i, j, k) = offset + amplitude * horiz * std::cos(std::numbers::pi * s);
        }
      }
  halo_exchange(u);
  DistributedField f = op.make_field();
  apply_operator(u, op, f);
  return {std::move(f), std::move(u)};
}

DistributedField random_rhs(const LevelOperator& op, std::uint64_t seed) {
  const PanelGrid& g = op.grid();
  const int nx = g.nx(), nz = g.nz();
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(nx) * nx * nz);
  for (auto& v : values) v = dist(gen);
  DistributedField f = op.make_field();
  f.assign_global(values);
  return f;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const double estimate = estimate_memory_bytes(spec);
  if (estimate > spec.memory_cap_bytes) {
    std::ostringstream msg;
    msg << "estimated memory " << estimate / (1024.0 * 1024 * 1024) << " GiB exceeds the cap of "
        << spec.memory_cap_bytes / (1024.0 * 1024 * 1024) << " GiB";
    throw MemoryCapError(msg.str(), estimate);
  }

  ExperimentResult result;
  result.params = spec.parameters();
  const ModelParameters& p = result.params;
  const PanelGrid grid(spec.nx, spec.nz, spec.constants.H, spec.flat);
  const Reduction reduction = spec.deterministic ? Reduction::kDeterministic : Reduction::kPerWorker;

  std::unique_ptr<LevelHierarchy> hier;
  std::unique_ptr<LevelOperator> own_op;
  if (spec.solver == SolverKind::kMultigrid) {
    hier = std::make_unique<LevelHierarchy>(grid, p.omega2, p.lambda2, spec.workers, spec.mg_config());
  } else {
    own_op = std::make_unique<LevelOperator>(grid, p, Decomposition::decompose(spec.nx, spec.workers));
  }
  const LevelOperator& op = hier ? hier->finest().op : *own_op;

  DistributedField rhs;
  DistributedField exact;
  switch (spec.rhs) {
    case RhsKind::kRandom:
      rhs = random_rhs(op, spec.seed);
      break;
    case RhsKind::kManufactured:
      std::tie(rhs, exact) = manufactured_rhs(op);
      break;
    case RhsKind::kFile: {
      const FieldDump dump = read_field_dump(spec.rhs_file);
      if (static_cast<int>(dump.nx) != spec.nx || static_cast<int>(dump.nz) != spec.nz)
        throw std::invalid_argument("right-hand side file dimensions do not match nx/nz");
      rhs = op.make_field();
      rhs.assign_global(dump.values);
      break;
    }
  }

  DistributedField u = op.make_field();
  if (hier) {
    result.report = mg_solve(rhs, *hier, spec.mg_config(), u);
  } else {
    KrylovConfig kc{spec.eps, 1e-300, spec.maxiter, reduction};
    const Preconditioner prec = spec.preconditioner == CGPreconditioner::kLine
                                    ? make_line_preconditioner(op, spec.rho)
                                    : make_identity_preconditioner();
    result.report = pcg_solve(rhs, make_operator(op), prec, kc, u);
    result.report.config_echo["preconditioner"] =
        spec.preconditioner == CGPreconditioner::kLine ? "line_ssor" : "identity";
    result.report.config_echo["rho"] = num(spec.rho);
  }
  result.report.config_echo["workers"] = std::to_string(spec.workers);
  result.report.config_echo["seed"] = std::to_string(spec.seed);

  if (spec.rhs == RhsKind::kManufactured) {
    const double ref = norm2(exact, reduction);
    axpy(-1.0, u, exact);
    result.manufactured_error = norm2(exact, reduction) / ref;
  }
  if (!spec.dump_solution.empty())
    write_field_dump(spec.dump_solution, u, spec.flat ? kDumpFlatMode : 0u);

  const SolveReport& rep = result.report;
  std::string policy;
  if (spec.solver == SolverKind::kMultigrid) {
    policy = to_string(spec.mg.policy);
    if (spec.mg.policy == LevelPolicy::kExplicit) policy += "(" + std::to_string(spec.mg.explicit_levels) + ")";
  } else {
    policy = result.report.config_echo["preconditioner"];
  }
  result.row = {{"nx", std::to_string(p.nx)},
                {"nz", std::to_string(p.nz)},
                {"dof", std::to_string(p.dof())},
                {"dt", num(p.dt)},
                {"omega2", num(p.omega2)},
                {"lambda2", num(p.lambda2)},
                {"f_omega2", num(p.f_omega2)},
                {"f_lambda2", num(p.f_lambda2)},
                {"solver", to_string(spec.solver)},
                {"policy", policy},
                {"workers", std::to_string(spec.workers)},
                {"iterations", std::to_string(rep.iterations)},
                {"converged", rep.converged ? "1" : "0"},
                {"final_rel_residual", num(rep.final_relative_residual(), "%.6e")},
                {"wall_time_s", num(rep.wall_time, "%.4f")},
                {"time_per_iter_s", num(rep.time_per_iteration(), "%.4f")},
                {"seed", std::to_string(spec.seed)}};
  if (!spec.output.empty()) append_csv(spec.output, csv_columns(), {format_csv_row(result.row)});
  return result;
}

const std::vector<std::string>& param_space_columns() {
  static const std::vector<std::string> cols = {"nx",      "nz",          "dof",         "dx_km",
                                                "dt",      "omega2",      "lambda2",     "beta_bottom",
                                                "beta_middle", "beta_top", "courant",    "c_horiz"};
  return cols;
}

const std::vector<std::pair<double, double>>& robustness_factors() {
  static const std::vector<std::pair<double, double>> f = {{1, 1}, {1, 1e2}, {1, 1e-2}, {10, 1}, {100, 1}};
  return f;
}

TableResult run_table(TableKind which, const TableBounds& b) {
  if (!is_power_of_two(b.nx_min) || !is_power_of_two(b.nx_max) || b.nx_min > b.nx_max)
    throw std::invalid_argument("table bounds must be powers of two with nx_min <= nx_max");
  TableResult out;
  auto dt_for = [&](int nx) { return b.base_dt * b.base_nx / nx; };

  if (which == TableKind::kParamSpace) {
    out.header = param_space_columns();
    for (int nx = b.nx_min; nx <= b.nx_max; nx *= 2) {
      const ModelParameters p = derive_parameters(nx, b.base.nz, dt_for(nx), b.base.constants);
      // beta only depends on the vertical levels, so a single column suffices.
      const PanelGrid column(1, p.nz, p.constants.H);
      out.rows.push_back({std::to_string(nx), std::to_string(p.nz), num(static_cast<double>(p.dof()), "%.3g"),
                          num(p.dx / 1000.0, "%.3g"), num(p.dt, "%.4g"), num(p.omega2, "%.3e"),
                          num(p.lambda2, "%.3e"), num(anisotropy(p, column, 0), "%.3e"),
                          num(anisotropy(p, column, p.nz / 2), "%.4g"), num(anisotropy(p, column, p.nz - 1), "%.3g"),
                          num(p.courant, "%.4g"), num(horizontal_coupling(p, 0), "%.4g")});
    }
    if (!b.base.output.empty()) {
      std::vector<std::string> lines;
      for (const auto& r : out.rows) lines.push_back(join(r));
      append_csv(b.base.output, out.header, lines);
    }
    return out;
  }

  out.header = csv_columns();
  std::vector<ExperimentSpec> specs;
  auto with = [&](int nx, double fo, double fl, SolverKind solver, LevelPolicy policy) {
    ExperimentSpec s = b.base;
    s.nx = nx;
    s.dt = dt_for(nx);
    s.f_omega2 = fo;
    s.f_lambda2 = fl;
    s.solver = solver;
    s.mg.policy = policy;
    return s;
  };
  switch (which) {
    case TableKind::kWeakScaling:
      for (int nx = b.nx_min; nx <= b.nx_max; nx *= 2)
        specs.push_back(with(nx, 1, 1, b.base.solver, b.base.mg.policy));
      break;
    case TableKind::kLevels:
      for (int nx = b.nx_min; nx <= b.nx_max; nx *= 2)
        for (auto pol : {LevelPolicy::kStandard, LevelPolicy::kShallow, LevelPolicy::kVeryShallow})
          specs.push_back(with(nx, 1, 1, SolverKind::kMultigrid, pol));
      break;
    case TableKind::kRobustness:
      for (const auto& [fo, fl] : robustness_factors()) {
        for (auto pol : {LevelPolicy::kStandard, LevelPolicy::kShallow, LevelPolicy::kVeryShallow})
          specs.push_back(with(b.robustness_nx, fo, fl, SolverKind::kMultigrid, pol));
        specs.push_back(with(b.robustness_nx, fo, fl, SolverKind::kCG, LevelPolicy::kStandard));
      }
      break;
    case TableKind::kParamSpace:
      break;
  }
  for (const auto& s : specs) {
    try {
      ExperimentResult r = run_experiment(s);
      out.rows.push_back({});
      for (const auto& c : csv_columns()) out.rows.back().push_back(r.row.at(c));
      out.experiments.push_back(std::move(r));
    } catch (const MemoryCapError& e) {
      out.partial = true;
      out.skipped.push_back("nx=" + std::to_string(s.nx) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace tpmg
