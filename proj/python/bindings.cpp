#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ftsample/applications.hpp"
#include "ftsample/bounds.hpp"
#include "ftsample/experiments.hpp"
#include "ftsample/number_theory.hpp"
#include "ftsample/sampling.hpp"
#include "ftsample/transform.hpp"

namespace py = pybind11;
using namespace ftsample;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexVector to_vector(const CArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), a.data() + a.shape(0)};
}

CArray to_array(std::span<const Complex> v) {
  CArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> masses(const Distribution& d) {
  py::array_t<double> out(static_cast<py::ssize_t>(d.p()));
  std::copy(d.masses().begin(), d.masses().end(), out.mutable_data());
  return out;
}

Direction direction(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "inverse") return Direction::inverse;
  throw py::value_error("direction must be 'forward' or 'inverse'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fourier sampling on zero-padded domains";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      std::string msg;
      for (const auto& issue : e.issues()) msg += (msg.empty() ? "" : "\n") + issue;
      py::set_error(error, msg.c_str());
    } catch (const Error& e) {
      py::set_error(error, (std::string(errc_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("check", &BoundReport::check)
      .def_readonly("computed", &BoundReport::computed)
      .def_readonly("bound", &BoundReport::bound)
      .def_readonly("slack", &BoundReport::slack)
      .def_readonly("passed", &BoundReport::pass)
      .def_readonly("vacuous", &BoundReport::vacuous)
      .def_readonly("hypothesis_met", &BoundReport::hypothesis_met)
      .def_property_readonly("params",
                             [](const BoundReport& r) {
                               py::dict d;
                               for (const auto& [k, v] : r.params) d[py::str(k)] = v;
                               return d;
                             })
      .def("to_json", &bound_report_to_json)
      .def("__repr__", [](const BoundReport& r) {
        return "<BoundReport " + r.check + (r.pass ? " pass" : " FAIL") + " slack=" +
               std::to_string(r.slack) + ">";
      });

  m.def(
      "dft",
      [](const CArray& v, std::size_t size, const std::string& dir) {
        return to_array(dft(Superposition::raw(to_vector(v)), size, direction(dir)).amplitudes());
      },
      py::arg("v"), py::arg("size"), py::arg("direction") = "forward",
      "FT_size of v zero-padded to `size`, with the 1/sqrt(size) factor.");

  m.def("dist_beta", [](const CArray& a) { return masses(dist_beta(Superposition(to_vector(a)))); },
        py::arg("alpha"));
  m.def(
      "dist_gamma",
      [](const CArray& a, std::size_t q) { return masses(dist_gamma(Superposition(to_vector(a)), q)); },
      py::arg("alpha"), py::arg("q"));
  m.def(
      "l1_distance",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return l1_distance(Distribution(a), Distribution(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "sample",
      [](const std::vector<double>& d, std::uint64_t seed) { return sample(Distribution(d), seed); },
      py::arg("masses"), py::arg("seed"));
  m.def(
      "primed_index", [](std::size_t i, std::size_t p, std::size_t q) { return primed_index(i, PrimedMap(p, q)); },
      py::arg("i"), py::arg("p"), py::arg("q"));

  m.def("claim1_check", &claim1_check, py::arg("j"), py::arg("p"), py::arg("q"));
  m.def("observation_check", &observation_check, py::arg("x"), py::arg("p"));
  m.def(
      "theorem_threshold",
      [](std::size_t p, double s_n) { return theorem_threshold(ThresholdParams::for_accuracy(p, s_n)); },
      py::arg("p"), py::arg("s_n"));
  m.def(
      "theorem1_check",
      [](const CArray& a, double s_n, std::size_t q) {
        return theorem1_check(Superposition(to_vector(a)), s_n, q);
      },
      py::arg("alpha"), py::arg("s_n"), py::arg("q"));

  m.def("euler_phi", &euler_phi, py::arg("r"));
  m.def("smooth_number_in_range", &smooth_number_in_range, py::arg("lo"), py::arg("hi"));
  m.def(
      "continued_fraction_round",
      [](std::uint64_t s, std::uint64_t q, std::uint64_t den_bound) {
        const auto f = continued_fraction_round(s, q, den_bound);
        return std::make_pair(f.numerator, f.denominator);
      },
      py::arg("s"), py::arg("q"), py::arg("den_bound"));

  m.def(
      "recover_period",
      [](const std::function<std::uint64_t(std::uint64_t)>& h, std::uint64_t seed, double s_n,
         std::uint64_t q_multiplier, std::uint64_t max_guess) {
        RecoveryOptions opt;
        opt.s_n = s_n;
        opt.q_multiplier = q_multiplier;
        opt.max_guess = max_guess;
        return recover_period(h, seed, opt).period;
      },
      py::arg("h"), py::arg("seed") = 0, py::arg("s_n") = 2.0, py::arg("q_multiplier") = 2,
      py::arg("max_guess") = 4096,
      "Period of h found from simulated Fourier samples; h maps int to int.");

  m.def(
      "bl_counting_check",
      [](const std::vector<std::int64_t>& b, std::uint64_t r) { return bl_counting_check(b, r); },
      py::arg("b"), py::arg("r"));

  m.def(
      "validate_config", [](const std::string& text) { return validate_config(text).to_json().dump(); },
      py::arg("yaml"), "Effective configuration as JSON, or Error listing every problem.");
  m.def(
      "run_config",
      [](const std::string& path, std::optional<std::string> out_dir) {
        auto config = load_config(path);
        if (out_dir) config.out_dir = *out_dir;
        py::gil_scoped_release release;
        return run(config).to_json();
      },
      py::arg("path"), py::arg("out_dir") = py::none(), "Runs an experiment config; returns the manifest JSON.");
  m.def(
      "figure_data",
      [](std::size_t j, std::size_t p, std::size_t q) { return emit_figure_data(j, p, q); },
      py::arg("j"), py::arg("p"), py::arg("q"));
}
