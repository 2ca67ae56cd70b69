#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "norden/cli.hpp"
#include "norden/errors.hpp"
#include "norden/io.hpp"
#include "norden/lab.hpp"

namespace py = pybind11;
using namespace norden;

namespace {

py::array_t<double> to_array(const Tensor& t) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(t.rank()), t.dim());
  py::array_t<double> a(shape);
  std::copy(t.components().begin(), t.components().end(), a.mutable_data());
  return a;
}

std::vector<double> as_point(const Chart& c, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != c.dim()) throw ArgumentError("point has the wrong length");
  return p;
}

LabConfig make_config(int points, std::uint64_t seed, double tol, std::array<double, 4> lambda) {
  if (points < 1) throw ArgumentError("points must be >= 1");
  if (!(tol > 0.0)) throw ArgumentError("tol must be > 0");
  LabConfig c;
  c.points = points;
  c.seed = seed;
  c.tol = tol;
  c.lambda = lambda;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical laboratory for almost complex manifolds with Norden metric";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);

  py::class_<Expression>(m, "Expression")
      .def(py::init([](const std::string& text, int dim) { return parse(text, dim); }), py::arg("text"), py::arg("dim"))
      .def_property_readonly("dim", &Expression::dim)
      .def("eval", [](const Expression& e, const std::vector<double>& p) { return e.eval(p); })
      .def(
          "jet",
          [](const Expression& e, const std::vector<double>& p) {
            const Jet j = e.eval_jet(p, 2);
            const int d = e.dim();
            py::array_t<double> grad(d);
            py::array_t<double> hess({d, d});
            for (int i = 0; i < d; ++i) {
              grad.mutable_at(i) = j.grad(i);
              for (int k = 0; k < d; ++k) hess.mutable_at(i, k) = j.hess(i, k);
            }
            return py::make_tuple(j.value(), grad, hess);
          },
          "value, gradient and Hessian at a point")
      .def("__str__", &Expression::print);

  py::class_<Chart>(m, "Chart")
      .def_property_readonly("name", &Chart::name)
      .def_property_readonly("dim", &Chart::dim)
      .def_property_readonly("domain", &Chart::domain)
      .def("to_json", [](const Chart& c) { return manifold_to_json(to_manifold_file(c)); })
      .def("sample_points", [](const Chart& c, int count, std::uint64_t seed) { return sample_points(c, count, seed); },
           py::arg("count") = 16, py::arg("seed") = 42);

  m.def("load_chart", [](const std::string& path) { return to_chart(load_manifold_file(path), path); });
  m.def("chart_from_json", [](const std::string& text) { return to_chart(parse_manifold_json(text)); });
  m.def("flat_kahler", &flat_kahler, py::arg("n") = 2);
  m.def("conformal_flat", &conformal_flat, py::arg("n"), py::arg("u"));

  m.def(
      "fields",
      [](const Chart& c, const std::vector<double>& p) {
        const PointFrame f(c, as_point(c, p), 2);
        py::dict d;
        d["g"] = to_array(f.values().g);
        d["J"] = to_array(f.values().J);
        d["g_tilde"] = to_array(f.values().g_tilde);
        d["F"] = to_array(values(f.F()));
        d["theta"] = to_array(values(f.theta()));
        d["omega"] = to_array(values(f.omega()));
        d["christoffel"] = to_array(values(f.christoffel(Which::g)));
        d["R0"] = to_array(curvature_R0(f));
        d["nijenhuis"] = to_array(nijenhuis(f));
        return d;
      },
      py::arg("chart"), py::arg("point"), "Tensors of the chart at one point, F(i,j,k), R0(x,y,z,w) lowered");

  m.def(
      "classify",
      [](const Chart& c, const std::vector<double>& p, double threshold) {
        const ClassReport r = classify(c, as_point(c, p), threshold);
        py::dict residuals, member;
        residuals["W0"] = r.residual_W0;
        residuals["W1"] = r.residual_W1;
        residuals["W2_cyclic"] = r.residual_W2_cyclic;
        residuals["theta"] = r.residual_theta;
        residuals["W3_cyclic"] = r.residual_W3_cyclic;
        residuals["W12_cyclic"] = r.residual_W12_cyclic;
        member["W0"] = r.W0;
        member["W1"] = r.W1;
        member["W2"] = r.W2;
        member["W3"] = r.W3;
        member["W1+W2"] = r.W12;
        py::dict d;
        d["residuals"] = residuals;
        d["member"] = member;
        return d;
      },
      py::arg("chart"), py::arg("point"), py::arg("threshold") = 1e-8);

  m.def("suite_ids", &suite_ids);
  m.def(
      "check_json",
      [](const Chart& c, const std::string& suite, int points, std::uint64_t seed, double tol,
         std::array<double, 4> lambda) {
        const Lab lab(c, make_config(points, seed, tol, lambda));
        std::vector<CheckReport> rs;
        {
          py::gil_scoped_release release;
          rs = lab.run(suite);
        }
        return reports_to_json(rs);
      },
      py::arg("chart"), py::arg("suite") = "all", py::arg("points") = 16, py::arg("seed") = 42, py::arg("tol") = 1e-8,
      py::arg("lambda_") = std::array<double, 4>{0.3, -0.7, 0.2, 0.5});

  m.def("closed_form_table", [] {
    py::list out;
    for (const auto& r : closed_form_table()) {
      py::dict d;
      d["tensor"] = r.tensor;
      d["printed"] = r.printed;
      d["derived"] = r.derived;
      d["agrees"] = r.agrees;
      out.append(d);
    }
    return out;
  });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Run the command line front end in-process, returns (exit code, stdout, stderr)");
}
