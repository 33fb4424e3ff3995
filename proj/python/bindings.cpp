#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpmg/experiment.hpp"
#include "tpmg/krylov.hpp"
#include "tpmg/multigrid.hpp"
#include "tpmg/params.hpp"

namespace py = pybind11;
using namespace tpmg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DistributedField field_from(const LevelOperator& op, const Array& a) {
  const int nx = op.grid().nx(), nz = op.grid().nz();
  if (a.ndim() != 3 || a.shape(0) != nx || a.shape(1) != nx || a.shape(2) != nz)
    throw std::invalid_argument("expected an array of shape (nx, nx, nz)");
  DistributedField f = op.make_field();
  f.assign_global(std::vector<double>(a.data(), a.data() + a.size()));
  halo_exchange(f);
  return f;
}

Array to_array(const DistributedField& f, int nx, int nz) {
  const auto g = f.to_global();
  Array out({nx, nx, nz});
  std::copy(g.begin(), g.end(), out.mutable_data());
  return out;
}

ModelParameters params_for(int nx, int nz, double dt, double f_omega2, double f_lambda2) {
  return derive_parameters(nx, nz, dt, {}, f_omega2, f_lambda2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tensor-product multigrid and line-preconditioned CG on a cubed-sphere panel shell";

  py::register_exception<MemoryCapError>(m, "MemoryCapError", PyExc_MemoryError);

  py::enum_<SolverKind>(m, "Solver").value("MG", SolverKind::kMultigrid).value("CG", SolverKind::kCG);
  py::enum_<LevelPolicy>(m, "Policy")
      .value("STANDARD", LevelPolicy::kStandard)
      .value("SHALLOW", LevelPolicy::kShallow)
      .value("VERY_SHALLOW", LevelPolicy::kVeryShallow)
      .value("EXPLICIT", LevelPolicy::kExplicit);
  py::enum_<RhsKind>(m, "Rhs")
      .value("RANDOM", RhsKind::kRandom)
      .value("MANUFACTURED", RhsKind::kManufactured)
      .value("FILE", RhsKind::kFile);
  py::enum_<TableKind>(m, "Table")
      .value("PARAM_SPACE", TableKind::kParamSpace)
      .value("WEAK_SCALING", TableKind::kWeakScaling)
      .value("LEVELS", TableKind::kLevels)
      .value("ROBUSTNESS", TableKind::kRobustness);

  py::class_<ModelParameters>(m, "ModelParameters")
      .def_readonly("nx", &ModelParameters::nx)
      .def_readonly("nz", &ModelParameters::nz)
      .def_readonly("dx", &ModelParameters::dx)
      .def_readonly("dt", &ModelParameters::dt)
      .def_readonly("omega2", &ModelParameters::omega2)
      .def_readonly("lambda2", &ModelParameters::lambda2)
      .def_readonly("courant", &ModelParameters::courant)
      .def_property_readonly("dof", &ModelParameters::dof)
      .def("__repr__", [](const ModelParameters& p) {
        return "ModelParameters(nx=" + std::to_string(p.nx) + ", nz=" + std::to_string(p.nz) +
               ", omega2=" + std::to_string(p.omega2) + ", lambda2=" + std::to_string(p.lambda2) + ")";
      });

  m.def("derive_parameters", &params_for, py::arg("nx"), py::arg("nz"), py::arg("dt"), py::arg("f_omega2") = 1.0,
        py::arg("f_lambda2") = 1.0);
  m.def(
      "anisotropy",
      [](int nx, int nz, double dt, int k) {
        const auto p = derive_parameters(nx, nz, dt);
        return anisotropy(p, PanelGrid(1, nz, p.constants.H), k);
      },
      py::arg("nx"), py::arg("nz"), py::arg("dt"), py::arg("k"), "beta on layer k");
  m.def(
      "level_count",
      [](int nx, int workers, LevelPolicy policy, int levels) {
        MGConfig cfg;
        cfg.policy = policy;
        cfg.explicit_levels = levels;
        return level_count(nx, workers, cfg);
      },
      py::arg("nx"), py::arg("workers") = 1, py::arg("policy") = LevelPolicy::kStandard, py::arg("levels") = 0);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("residual_history", &SolveReport::residual_history)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("breakdown", &SolveReport::breakdown)
      .def_readonly("wall_time", &SolveReport::wall_time)
      .def_readonly("config_echo", &SolveReport::config_echo)
      .def_readonly("warnings", &SolveReport::warnings)
      .def_property_readonly("final_relative_residual", &SolveReport::final_relative_residual);

  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("solver", &ExperimentSpec::solver)
      .def_readwrite("nx", &ExperimentSpec::nx)
      .def_readwrite("nz", &ExperimentSpec::nz)
      .def_readwrite("dt", &ExperimentSpec::dt)
      .def_readwrite("f_omega2", &ExperimentSpec::f_omega2)
      .def_readwrite("f_lambda2", &ExperimentSpec::f_lambda2)
      .def_readwrite("workers", &ExperimentSpec::workers)
      .def_readwrite("eps", &ExperimentSpec::eps)
      .def_readwrite("maxiter", &ExperimentSpec::maxiter)
      .def_readwrite("rho", &ExperimentSpec::rho)
      .def_readwrite("rhs", &ExperimentSpec::rhs)
      .def_readwrite("seed", &ExperimentSpec::seed)
      .def_readwrite("rhs_file", &ExperimentSpec::rhs_file)
      .def_readwrite("flat", &ExperimentSpec::flat)
      .def_readwrite("deterministic", &ExperimentSpec::deterministic)
      .def_readwrite("output", &ExperimentSpec::output)
      .def_readwrite("dump_solution", &ExperimentSpec::dump_solution)
      .def_readwrite("memory_cap_bytes", &ExperimentSpec::memory_cap_bytes)
      .def_property(
          "policy", [](const ExperimentSpec& s) { return s.mg.policy; },
          [](ExperimentSpec& s, LevelPolicy p) { s.mg.policy = p; })
      .def_property(
          "levels", [](const ExperimentSpec& s) { return s.mg.explicit_levels; },
          [](ExperimentSpec& s, int l) { s.mg.explicit_levels = l; })
      .def_property(
          "coarse_sweeps", [](const ExperimentSpec& s) { return s.mg.coarse_sweeps; },
          [](ExperimentSpec& s, std::optional<int> c) { s.mg.coarse_sweeps = c; })
      .def_property(
          "l_split", [](const ExperimentSpec& s) { return s.mg.l_split; },
          [](ExperimentSpec& s, std::optional<int> l) { s.mg.l_split = l; })
      .def("validate", &ExperimentSpec::validate);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("params", &ExperimentResult::params)
      .def_readonly("report", &ExperimentResult::report)
      .def_readonly("row", &ExperimentResult::row)
      .def_readonly("manufactured_error", &ExperimentResult::manufactured_error);

  m.def("estimate_memory_bytes", &estimate_memory_bytes);
  m.def("run_experiment", &run_experiment, py::arg("spec"), py::call_guard<py::gil_scoped_release>());

  py::class_<TableBounds>(m, "TableBounds")
      .def(py::init<>())
      .def_readwrite("nx_min", &TableBounds::nx_min)
      .def_readwrite("nx_max", &TableBounds::nx_max)
      .def_readwrite("base_nx", &TableBounds::base_nx)
      .def_readwrite("base_dt", &TableBounds::base_dt)
      .def_readwrite("robustness_nx", &TableBounds::robustness_nx)
      .def_readwrite("base", &TableBounds::base);
  py::class_<TableResult>(m, "TableResult")
      .def_readonly("header", &TableResult::header)
      .def_readonly("rows", &TableResult::rows)
      .def_readonly("experiments", &TableResult::experiments)
      .def_readonly("partial", &TableResult::partial)
      .def_readonly("skipped", &TableResult::skipped);
  m.def("run_table", &run_table, py::arg("kind"), py::arg("bounds") = TableBounds{},
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "apply_operator",
      [](const Array& u, double dt, bool flat) {
        const int nx = static_cast<int>(u.shape(0)), nz = static_cast<int>(u.shape(2));
        const auto p = derive_parameters(nx, nz, dt);
        const LevelOperator op(PanelGrid(nx, nz, p.constants.H, flat), p, Decomposition::decompose(nx, 1));
        const auto x = field_from(op, u);
        auto y = op.make_field();
        apply_operator(x, op, y);
        return to_array(y, nx, nz);
      },
      py::arg("u"), py::arg("dt"), py::arg("flat") = false, "A u for an (nx, nx, nz) array");

  m.def(
      "solve",
      [](const Array& f, double dt, SolverKind solver, LevelPolicy policy, int workers, double eps, int maxiter,
         bool flat) {
        if (f.ndim() != 3) throw std::invalid_argument("expected an array of shape (nx, nx, nz)");
        const int nx = static_cast<int>(f.shape(0)), nz = static_cast<int>(f.shape(2));
        const auto p = derive_parameters(nx, nz, dt);
        const PanelGrid grid(nx, nz, p.constants.H, flat);
        SolveReport rep;
        Array out;
        if (solver == SolverKind::kMultigrid) {
          MGConfig cfg;
          cfg.policy = policy;
          cfg.eps = eps;
          cfg.maxiter = maxiter;
          LevelHierarchy h(grid, p.omega2, p.lambda2, workers, cfg);
          const auto rhs = field_from(h.finest().op, f);
          auto u = h.finest().op.make_field();
          rep = mg_solve(rhs, h, cfg, u);
          out = to_array(u, nx, nz);
        } else {
          const LevelOperator op(grid, p, Decomposition::decompose(nx, workers));
          const auto rhs = field_from(op, f);
          auto u = op.make_field();
          rep = pcg_solve(rhs, make_operator(op), make_line_preconditioner(op), {eps, 1e-300, maxiter}, u);
          out = to_array(u, nx, nz);
        }
        return py::make_tuple(out, rep);
      },
      py::arg("f"), py::arg("dt"), py::arg("solver") = SolverKind::kMultigrid,
      py::arg("policy") = LevelPolicy::kStandard, py::arg("workers") = 1, py::arg("eps") = 1e-5,
      py::arg("maxiter") = 100, py::arg("flat") = false, "Solves A u = f; returns (u, report)");
}
