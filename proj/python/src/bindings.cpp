#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stargraph/anomalous.hpp"
#include "stargraph/cli.hpp"
#include "stargraph/roots.hpp"
#include "stargraph/secular.hpp"

namespace py = pybind11;
using namespace stargraph;

namespace {

RootSearchRegion make_region(double mu_min, double mu_max, double nu_min, double nu_max, int grid) {
  RootSearchRegion r;
  r.mu_min = mu_min;
  r.mu_max = mu_max;
  r.nu_min = nu_min;
  r.nu_max = nu_max;
  r.grid_mu = grid;
  r.grid_nu = grid;
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bound states of PT-symmetric Robin star graphs";

  py::register_exception<DegenerateConfiguration>(m, "DegenerateConfiguration", PyExc_ArithmeticError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ArithmeticError);
  py::register_exception<BifurcationNotFound>(m, "BifurcationNotFound", PyExc_RuntimeError);
  py::register_exception<CertificationUnavailable>(m, "CertificationUnavailable", PyExc_RuntimeError);

  py::class_<StarGraphModel>(m, "StarGraphModel")
      .def(py::init<int, double, double>(), py::arg("q"), py::arg("alpha"), py::arg("length") = 1.0)
      .def_property_readonly("q", &StarGraphModel::q)
      .def_property_readonly("alpha", &StarGraphModel::alpha)
      .def_property_readonly("length", &StarGraphModel::length)
      .def("__repr__", [](const StarGraphModel& s) {
        std::ostringstream os;
        os << "StarGraphModel(q=" << s.q() << ", alpha=" << s.alpha() << ", length=" << s.length()
           << ")";
        return os.str();
      });

  m.def(
      "real_spectrum",
      [](const StarGraphModel& model, double k_max) {
        std::vector<std::pair<double, std::string>> out;
        for (const auto& r : real_spectrum(model, k_max))
          out.emplace_back(r.k, to_string(r.classification.kind));
        return out;
      },
      py::arg("model"), py::arg("k_max"), "Real roots as (k, kind) pairs, ascending.");

  m.def(
      "complex_roots",
      [](const StarGraphModel& model, double mu_min, double mu_max, double nu_min, double nu_max,
         int grid) {
        std::vector<std::complex<double>> out;
        for (const auto& r : complex_roots(model, make_region(mu_min, mu_max, nu_min, nu_max, grid)))
          out.push_back(r.k.value());
        return out;
      },
      py::arg("model"), py::arg("mu_min"), py::arg("mu_max"), py::arg("nu_min"), py::arg("nu_max"),
      py::arg("grid") = 96);

  m.def(
      "count_roots",
      [](const StarGraphModel& model, double mu_min, double mu_max, double nu_min, double nu_max) {
        return count_roots_in_region(model, make_region(mu_min, mu_max, nu_min, nu_max, 96));
      },
      py::arg("model"), py::arg("mu_min"), py::arg("mu_max"), py::arg("nu_min"), py::arg("nu_max"));

  m.def(
      "secular_sum",
      [](const StarGraphModel& model, std::complex<double> k) {
        return secular_sum(ComplexWaveNumber(k), model).value;
      },
      py::arg("model"), py::arg("k"));

  m.def(
      "secular_closed",
      [](const StarGraphModel& model, std::complex<double> k) {
        const auto cf = secular_closed_regularized(ComplexWaveNumber(k), model);
        return std::make_pair(cf.numerator, cf.denominator);
      },
      py::arg("model"), py::arg("k"), "Numerator and denominator of the closed form.");

  m.def(
      "matching_determinant",
      [](const StarGraphModel& model, std::complex<double> k) {
        return matching_determinant(ComplexWaveNumber(k), model).relative;
      },
      py::arg("model"), py::arg("k"), "Row-normalized determinant relative to its Hadamard bound.");

  m.def(
      "anomalous_real_roots",
      [](int mm, double alpha, double length, double k_max) {
        std::vector<double> out;
        for (const auto& r : anomalous_real_roots(mm, alpha, length, k_max)) out.push_back(r.k);
        return out;
      },
      py::arg("m"), py::arg("alpha"), py::arg("length"), py::arg("k_max"));

  m.def(
      "critical_alpha",
      [](int mm, double length) {
        const auto p = critical_alpha(mm, length);
        return std::make_pair(p.alpha_critical, p.k_merge);
      },
      py::arg("m"), py::arg("length") = 1.0, "(alpha_critical, k_merge) on the first branch.");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"stargraph"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return std::make_pair(code, out.str());
      },
      py::arg("args"), "Run the command-line front end; returns (exit_code, stdout).");
}
