#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slspec/asymptotics.hpp"
#include "slspec/cli.hpp"
#include "slspec/errors.hpp"
#include "slspec/oracle.hpp"
#include "slspec/oscillatory.hpp"
#include "slspec/validation.hpp"

namespace py = pybind11;
using namespace slspec;

namespace {

py::dict table_dict(const EigenfunctionTable& t) {
  py::dict d;
  d["n"] = t.n;
  d["kind"] = to_string(t.kind);
  d["grid"] = t.grid;
  d["values"] = t.values;
  d["normalization"] = t.normalization;
  return d;
}

std::vector<double> grid_or_uniform(const std::optional<std::vector<double>>& grid, int points) {
  return grid ? *grid : uniform_grid(points);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Asymptotic and numerical spectra of -y'' + u'y on [0, pi]";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SingularArgument>(m, "SingularArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<IndexingError>(m, "IndexingError", PyExc_RuntimeError);
  py::register_exception<IntegrationBlowup>(m, "IntegrationBlowup", PyExc_RuntimeError);

  py::class_<PotentialSpec>(m, "Potential")
      .def_static("zero", &PotentialSpec::zero)
      .def_static("constant", &PotentialSpec::constant, py::arg("c"))
      .def_static("step", &PotentialSpec::step, py::arg("at"), py::arg("height"))
      .def_static("trig", &PotentialSpec::trig, py::arg("coeffs"))
      .def_static("poly", &PotentialSpec::poly, py::arg("coeffs"))
      .def_static("from_json", &parse_potential, py::arg("text"))
      .def_static("load", &load_potential, py::arg("path"))
      .def("to_json", &potential_to_json)
      .def("__call__", [](const PotentialSpec& p, double x) { return eval_u(p, x); })
      .def_property_readonly("kind", [](const PotentialSpec& p) { return to_string(p.kind()); })
      .def_property_readonly("breakpoints", &PotentialSpec::breakpoints)
      .def("is_real", &PotentialSpec::is_real)
      .def("l2_norm_sq", &PotentialSpec::l2_norm_sq)
      .def("__eq__", [](const PotentialSpec& a, const PotentialSpec& b) { return a == b; })
      .def("__repr__", &PotentialSpec::describe);

  py::class_<VDecomposition>(m, "VDecomposition")
      .def_readonly("term_single_sin", &VDecomposition::term_single_sin)
      .def_readonly("term_l2", &VDecomposition::term_l2)
      .def_readonly("term_double", &VDecomposition::term_double)
      .def_readonly("term_u2_cos", &VDecomposition::term_u2_cos)
      .def_readonly("total", &VDecomposition::total);

  py::class_<GammaValue>(m, "GammaValue")
      .def_readonly("value", &GammaValue::value)
      .def_readonly("upper_bound", &GammaValue::upper_bound)
      .def_readonly("sup_sin", &GammaValue::sup_sin)
      .def_readonly("sup_cos", &GammaValue::sup_cos)
      .def_readonly("sup_double", &GammaValue::sup_double)
      .def_readonly("sup_u2_cos", &GammaValue::sup_u2_cos)
      .def_readonly("tail", &GammaValue::tail);

  py::class_<SpectralPoint>(m, "SpectralPoint")
      .def_readonly("n", &SpectralPoint::n)
      .def_readonly("m", &SpectralPoint::m)
      .def_readonly("sqrt_lambda_asym", &SpectralPoint::sqrt_lambda_asym)
      .def_readonly("phase_correction", &SpectralPoint::phase_correction)
      .def_readonly("gamma_at_m2", &SpectralPoint::gamma_at_m2);

  py::class_<SecularResult>(m, "SecularResult")
      .def_readonly("lam", &SecularResult::lambda)
      .def_readonly("sqrt_lambda", &SecularResult::sqrt_lambda)
      .def_readonly("residual", &SecularResult::residual)
      .def_readonly("iterations", &SecularResult::iterations);

  m.def("eval_v", &eval_v, py::arg("p"), py::arg("x"), py::arg("lam"));
  m.def("eval_gamma", &eval_gamma, py::arg("p"), py::arg("lam"), py::arg("sup_grid") = 2048);
  m.def("eigenvalue_asym", &eigenvalue_asym, py::arg("p"), py::arg("n"), py::arg("gamma_grid") = 2048);
  m.def(
      "solve_eigenvalue",
      [](const PotentialSpec& p, int n, double tol) {
        SolveOptions o;
        o.tol = tol;
        return solve_eigenvalue(p, n, eigenvalue_asym(p, n), o);
      },
      py::arg("p"), py::arg("n"), py::arg("tol") = 1e-13);
  m.def("characteristic", [](const PotentialSpec& p, cplx lam) { return characteristic(p, lam); },
        py::arg("p"), py::arg("lam"));
  m.def("theta_asym", &theta_asym, py::arg("p"), py::arg("x"), py::arg("lam"));
  m.def("r_asym", &r_asym, py::arg("p"), py::arg("x"), py::arg("lam"));
  m.def("uniform_grid", &uniform_grid, py::arg("points"));

  m.def(
      "eigenfunction_asym",
      [](const PotentialSpec& p, int n, std::optional<std::vector<double>> grid, int points) {
        return table_dict(eigenfunction_asym(p, n, grid_or_uniform(grid, points)));
      },
      py::arg("p"), py::arg("n"), py::arg("grid") = py::none(), py::arg("points") = 513);
  m.def(
      "biorthogonal_asym",
      [](const PotentialSpec& p, int n, std::optional<std::vector<double>> grid, int points) {
        return table_dict(biorthogonal_asym(p, n, grid_or_uniform(grid, points)));
      },
      py::arg("p"), py::arg("n"), py::arg("grid") = py::none(), py::arg("points") = 513);
  m.def(
      "eigenfunction_numeric",
      [](const PotentialSpec& p, int n, std::optional<std::vector<double>> grid, int points) {
        const auto g = grid_or_uniform(grid, points);
        const auto asym = eigenfunction_asym(p, n, g);
        const auto res = solve_eigenvalue(p, n, eigenvalue_asym(p, n));
        return table_dict(eigenfunction_numeric(p, res.lambda, g, n, &asym));
      },
      py::arg("p"), py::arg("n"), py::arg("grid") = py::none(), py::arg("points") = 513);

  m.def(
      "validate",
      [](const PotentialSpec& p, int n_max, int n_min, int grid, int jobs) {
        SweepOptions o;
        o.n_min = n_min;
        o.grid = grid;
        o.jobs = jobs;
        py::gil_scoped_release release;
        return report_to_json(remainder_sweep(p, n_max, o));
      },
      py::arg("p"), py::arg("n_max"), py::arg("n_min") = 1, py::arg("grid") = 513, py::arg("jobs") = 1,
      "Remainder sweep as a JSON report string.");

  py::enum_<Command>(m, "Command")
      .value("spectrum", Command::spectrum)
      .value("eigenfunction", Command::eigenfunction)
      .value("validate", Command::validate)
      .value("gamma", Command::gamma);
  py::enum_<Method>(m, "Method").value("asym", Method::asym).value("shoot", Method::shoot).value("both", Method::both);
  py::enum_<EigenKind>(m, "EigenKind")
      .value("asym", EigenKind::asym)
      .value("biorth", EigenKind::biorth)
      .value("oracle", EigenKind::oracle);
  py::enum_<OutputFormat>(m, "OutputFormat").value("csv", OutputFormat::csv).value("json", OutputFormat::json);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("potential_path", &RunConfig::potential_path)
      .def_readwrite("command", &RunConfig::command)
      .def_readwrite("n_min", &RunConfig::n_min)
      .def_readwrite("n_max", &RunConfig::n_max)
      .def_readwrite("n", &RunConfig::n)
      .def_readwrite("grid", &RunConfig::grid)
      .def_readwrite("method", &RunConfig::method)
      .def_readwrite("kind", &RunConfig::kind)
      .def_readwrite("alpha", &RunConfig::alpha)
      .def_readwrite("tol_root", &RunConfig::tol_root)
      .def_readwrite("tol_quad", &RunConfig::tol_quad)
      .def_readwrite("format", &RunConfig::format)
      .def_readwrite("jobs", &RunConfig::jobs)
      .def("validate", &RunConfig::validate)
      .def("to_json", &RunConfig::to_json);

  // same dispatch as the command-line tool, returning the text it would print
  m.def(
      "run",
      [](const RunConfig& cfg) {
        cfg.validate();
        const auto p = load_potential(cfg.potential_path);
        py::gil_scoped_release release;
        switch (cfg.command) {
          case Command::spectrum: return cmd_spectrum(cfg, p);
          case Command::eigenfunction: return cmd_eigenfunction(cfg, p);
          case Command::validate: return cmd_validate(cfg, p);
          case Command::gamma: return cmd_gamma(cfg, p);
        }
        return std::string();
      },
      py::arg("config"));
}
