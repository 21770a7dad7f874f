#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sdc/analysis.hpp"
#include "sdc/checks.hpp"
#include "sdc/config.hpp"
#include "sdc/docs.hpp"
#include "sdc/driver.hpp"
#include "sdc/mesh.hpp"
#include "sdc/mms.hpp"

namespace py = pybind11;

namespace {

sdc::RunConfig make_config(const std::string& test, const py::kwargs& kw) {
  sdc::RunConfig c = sdc::preset(test);
  for (const auto& [k, v] : kw) sdc::apply_setting(c, py::str(k), py::str(v));
  c.validate();
  return c;
}

py::dict run_dict(const sdc::RunResult& r) {
  py::dict d;
  d["max_err_w"] = r.max_err_w;
  d["max_err_p"] = r.max_err_p;
  d["max_norm_w"] = r.max_norm_w;
  d["max_norm_w_exact"] = r.max_norm_w_exact;
  d["max_div_residual"] = r.max_div_residual;
  d["max_solve_residual"] = r.max_solve_residual;
  d["seconds"] = r.march_seconds;
  py::list steps;
  for (const auto& s : r.steps) {
    py::dict row;
    row["n"] = s.n;
    row["t"] = s.t;
    row["err_w"] = s.err_w;
    row["err_p"] = s.err_p;
    row["div_residual"] = s.div_residual;
    row["norm_w"] = s.norm_w;
    steps.append(row);
  }
  d["steps"] = steps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled Stokes-Darcy finite element solver";

  py::register_exception<sdc::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<sdc::StepError>(m, "StepError", PyExc_RuntimeError);

  m.def(
      "mesh_counts",
      [](int n) {
        const sdc::Mesh mesh = sdc::Mesh::build_structured(sdc::Geometry{}, n);
        py::dict d;
        d["vertices"] = mesh.vertices().size();
        d["cells"] = mesh.cells().size();
        d["edges"] = mesh.edges().size();
        d["interface"] = mesh.count(sdc::EdgeTag::interface);
        d["exterior_fluid"] = mesh.count(sdc::EdgeTag::exterior_fluid);
        d["exterior_porous"] = mesh.count(sdc::EdgeTag::exterior_porous);
        d["h"] = mesh.h();
        return d;
      },
      py::arg("n"), "Vertex, cell and edge-tag counts of the structured mesh with n cells per unit length.");

  m.def(
      "config",
      [](const std::string& test, const py::kwargs& kw) { return make_config(test, kw).dump(); },
      py::arg("test") = "test1", "Resolved configuration as key=value text; keyword arguments override keys.");

  m.def(
      "run",
      [](const std::string& test, const py::kwargs& kw) {
        const sdc::RunConfig c = make_config(test, kw);
        py::gil_scoped_release release;
        sdc::RunResult r = sdc::simulate(c);
        py::gil_scoped_acquire acquire;
        return run_dict(r);
      },
      py::arg("test") = "test1", "One simulation of the manufactured problem.");

  m.def(
      "convergence",
      [](const std::string& vary, const std::vector<int>& levels, const std::string& test, const py::kwargs& kw) {
        const sdc::RunConfig c = make_config(test, kw);
        const sdc::Vary v = vary == "h" ? sdc::Vary::h : sdc::Vary::sigma;
        if (vary != "h" && vary != "sigma") throw sdc::ConfigError("vary", "expected h or sigma");
        sdc::ConvergenceRecord rec;
        {
          py::gil_scoped_release release;
          rec = sdc::convergence_study(c, v, levels);
        }
        return sdc::emit_table(rec);
      },
      py::arg("vary"), py::arg("levels"), py::arg("test") = "test1",
      "Refinement sweep; returns the CSV table.");

  m.def("conv_order", py::overload_cast<double, double>(&sdc::conv_order), py::arg("coarse"), py::arg("fine"));

  m.def(
      "infsup",
      [](int n) {
        const sdc::Mesh mesh = sdc::Mesh::build_structured(sdc::Geometry{}, n);
        return sdc::infsup_estimate(mesh, sdc::ElementKind::Q2);
      },
      py::arg("n"), "Discrete inf-sup estimate of the Q2/Q1 pair.");

  m.def(
      "eval_exact",
      [](const std::string& field, double x, double y, double t) {
        sdc::Field f;
        if (field == "v") f = sdc::Field::velocity;
        else if (field == "p") f = sdc::Field::pressure;
        else if (field == "phi") f = sdc::Field::head;
        else throw py::value_error("field must be v, p or phi");
        const sdc::Vec2 v = sdc::eval_exact(f, {x, y}, t);
        if (f == sdc::Field::velocity) return py::tuple(py::make_tuple(v.x, v.y));
        return py::tuple(py::make_tuple(v.x));
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("t"));

  m.def(
      "check",
      [](bool include_stability) {
        sdc::CheckFixture f;
        f.include_stability = include_stability;
        py::list out;
        for (const auto& r : sdc::run_checks(f)) out.append(py::make_tuple(r.name, r.pass, r.detail));
        return out;
      },
      py::arg("include_stability") = false, "Property suite as (name, passed, detail) tuples.");

  m.def("docs", []() { return sdc::generate_index(); }, "Math-to-code index and errata in markdown.");
}
