// Benchmark driver: single solves or whole tables.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tpmg/experiment.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitMemory = 4;

// Config keys become leading --key=value arguments so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args;
  std::string config;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) config = argv[i + 1];
    if (a.rfind("--config=", 0) == 0) config = a.substr(9);
  }
  if (!config.empty()) {
    for (const auto& [k, value] : tpmg::read_key_value_file(config)) {
      std::string key = k;
      for (auto& c : key)
        if (c == '_') c = '-';
      args.push_back("--" + key + "=" + value);
    }
  }
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return args;
}

void print_report(const tpmg::ExperimentResult& r) {
  const auto& p = r.params;
  std::printf("nx=%d nz=%d dof=%lld dt=%g omega2=%.4g lambda2=%.4g\n", p.nx, p.nz,
              static_cast<long long>(p.dof()), p.dt, p.omega2, p.lambda2);
  for (const auto& [k, v] : r.report.config_echo) std::printf("  %s=%s\n", k.c_str(), v.c_str());
  const auto& h = r.report.residual_history;
  for (std::size_t i = 0; i < h.size(); ++i) std::printf("  iter %3zu  ||r||/||r0|| = %.3e\n", i, h[i] / h[0]);
  std::printf("iterations=%d converged=%s wall_time=%.3fs per_iter=%.4fs\n", r.report.iterations,
              r.report.converged ? "yes" : "no", r.report.wall_time, r.report.time_per_iteration());
  if (r.manufactured_error >= 0) std::printf("manufactured_error=%.3e\n", r.manufactured_error);
  for (const auto& w : r.report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

void print_table(const tpmg::TableResult& t) {
  std::string line;
  for (const auto& h : t.header) line += (line.empty() ? "" : ",") + h;
  std::puts(line.c_str());
  for (const auto& row : t.rows) {
    line.clear();
    for (const auto& v : row) line += (line.empty() ? "" : ",") + v;
    std::puts(line.c_str());
  }
  for (const auto& s : t.skipped) std::fprintf(stderr, "skipped %s\n", s.c_str());
  if (t.partial) std::fprintf(stderr, "table is partial\n");
}

}  // namespace

int main(int argc, char** argv) {
  tpmg::ExperimentSpec spec;
  std::string solver = "mg", policy = "standard", rhs = "random", precond = "line", table, config;
  int levels = 0, coarse_sweeps = 0, l_split = 0;
  int nx_min = 256, nx_max = 1024, robustness_nx = 512;
  double memory_cap_gib = spec.memory_cap_bytes / (1024.0 * 1024 * 1024);

  CLI::App app{"Tensor-product multigrid and line-preconditioned CG on a cubed-sphere panel"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", config, "key=value file of defaults");
  app.add_option("--nx", spec.nx, "horizontal cells per panel side")->capture_default_str();
  app.add_option("--nz", spec.nz, "vertical levels")->capture_default_str();
  app.add_option("--dt", spec.dt, "time step [s]")->capture_default_str();
  app.add_option("--solver", solver, "mg or cg")->capture_default_str();
  app.add_option("--policy", policy, "standard, shallow, very_shallow or explicit")->capture_default_str();
  app.add_option("--levels", levels, "number of levels (implies --policy explicit)");
  app.add_option("--coarse-sweeps", coarse_sweeps, "smoother sweeps on the coarsest level");
  app.add_option("--l-split", l_split, "fold onto fewer workers at this level and below");
  app.add_option("--workers", spec.workers, "simulated workers, a power of 4")->capture_default_str();
  app.add_option("--eps", spec.eps, "relative residual reduction")->capture_default_str();
  app.add_option("--maxiter", spec.maxiter, "iteration limit")->capture_default_str();
  app.add_option("--rho", spec.rho, "overrelaxation factor")->capture_default_str();
  app.add_option("--nu-pre", spec.mg.nu_pre, "pre-smoothing sweeps")->capture_default_str();
  app.add_option("--nu-post", spec.mg.nu_post, "post-smoothing sweeps")->capture_default_str();
  app.add_option("--f-omega2", spec.f_omega2, "multiplier on omega^2")->capture_default_str();
  app.add_option("--f-lambda2", spec.f_lambda2, "multiplier on lambda^2")->capture_default_str();
  app.add_option("--preconditioner", precond, "cg preconditioner: line or identity")->capture_default_str();
  app.add_option("--rhs", rhs, "random, manufactured or file")->capture_default_str();
  app.add_option("--rhs-file", spec.rhs_file, "field dump used with --rhs file");
  app.add_option("--seed", spec.seed, "random right-hand side seed")->capture_default_str();
  app.add_flag("--flat", spec.flat, "flat geometry");
  app.add_flag("--deterministic", spec.deterministic, "decomposition independent reductions");
  app.add_option("--output", spec.output, "append CSV rows here");
  app.add_option("--dump-solution", spec.dump_solution, "write the solution field here");
  app.add_option("--memory-cap-gib", memory_cap_gib, "refuse runs estimated above this")->capture_default_str();
  app.add_option("--table", table, "param_space, weak_scaling, levels or robustness");
  app.add_option("--nx-min", nx_min, "smallest nx of a table")->capture_default_str();
  app.add_option("--nx-max", nx_max, "largest nx of a table")->capture_default_str();
  app.add_option("--robustness-nx", robustness_nx, "resolution of the robustness table")->capture_default_str();

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }

  try {
    spec.solver = tpmg::parse_solver(solver);
    spec.rhs = tpmg::parse_rhs(rhs);
    spec.mg.policy = tpmg::parse_level_policy(policy);
    if (levels > 0) {
      spec.mg.policy = tpmg::LevelPolicy::kExplicit;
      spec.mg.explicit_levels = levels;
    }
    if (coarse_sweeps > 0) spec.mg.coarse_sweeps = coarse_sweeps;
    if (l_split > 0) spec.mg.l_split = l_split;
    if (precond == "line")
      spec.preconditioner = tpmg::CGPreconditioner::kLine;
    else if (precond == "identity")
      spec.preconditioner = tpmg::CGPreconditioner::kIdentity;
    else
      throw std::invalid_argument("unknown preconditioner '" + precond + "'");
    spec.memory_cap_bytes = memory_cap_gib * 1024.0 * 1024 * 1024;

    if (!table.empty()) {
      tpmg::TableBounds b;
      b.nx_min = nx_min;
      b.nx_max = nx_max;
      b.robustness_nx = robustness_nx;
      b.base = spec;
      const auto t = tpmg::run_table(tpmg::parse_table(table), b);
      print_table(t);
      for (const auto& e : t.experiments)
        if (!e.report.converged) return kExitNotConverged;
      return kExitConverged;
    }
    const auto r = tpmg::run_experiment(spec);
    print_report(r);
    return r.report.converged ? kExitConverged : kExitNotConverged;
  } catch (const tpmg::MemoryCapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMemory;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
}
