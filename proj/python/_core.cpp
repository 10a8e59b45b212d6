#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "widomlab/acceptance.hpp"
#include "widomlab/bandset.hpp"
#include "widomlab/config.hpp"
#include "widomlab/construct_pointmass.hpp"
#include "widomlab/construct_sc.hpp"
#include "widomlab/error.hpp"
#include "widomlab/io.hpp"
#include "widomlab/potential.hpp"
#include "widomlab/reflectionless.hpp"

namespace py = pybind11;
using namespace widomlab;

namespace {

using Bands = std::vector<std::pair<double, double>>;

BandSet to_bandset(const Bands& b) {
  std::vector<Interval> v;
  for (const auto& [lo, hi] : b) v.push_back(make_interval(lo, hi));
  return make_bandset(v);
}

Bands from_bandset(const BandSet& E) {
  Bands out;
  for (const auto& b : E.bands()) out.emplace_back(b.lo, b.hi);
  return out;
}

// Config overrides arrive as a JSON string so the same keys work as in config files.
RunConfig config_from(const std::string& overrides) {
  RunConfig cfg;
  if (!overrides.empty()) apply_json(cfg, parse_json(overrides, "config"));
  validate(cfg);
  return cfg;
}

ArcSelection arc_or_all(const BandSet& E, const std::optional<std::pair<double, double>>& arc) {
  return arc ? arc_in(E, arc->first, arc->second) : whole_set(E);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Harmonic measure, reflectionless functions and Widom-set constructions";

  // Translators are tried newest first, so the base goes in first.
  const auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("normalize_bands", [](const Bands& b) { return from_bandset(to_bandset(b)); }, py::arg("bands"));

  m.def(
      "harmonic_measure",
      [](const Bands& b, std::optional<double> pole, std::optional<std::pair<double, double>> arc) {
        const BandSet E = to_bandset(b);
        return harmonic_measure(E, pole, arc_or_all(E, arc)).value;
      },
      py::arg("bands"), py::arg("pole") = py::none(), py::arg("arc") = py::none(),
      "Harmonic measure of `arc` (default: the whole set) seen from `pole` (None is infinity).");

  m.def(
      "equilibrium",
      [](const Bands& b) {
        const EquilibriumData eq = equilibrium(to_bandset(b));
        const WidomSum ws = widom_sum(eq);
        py::dict d;
        d["critical_points"] = eq.roots;
        d["poly_coeffs"] = eq.poly_coeffs;
        d["widom_terms"] = ws.terms;
        d["widom_sum"] = ws.sum;
        return d;
      },
      py::arg("bands"));

  m.def(
      "green",
      [](const Bands& b, const std::vector<double>& xs) {
        const EquilibriumData eq = equilibrium(to_bandset(b));
        std::vector<double> out;
        for (double x : xs) out.push_back(green_value(eq, x));
        return out;
      },
      py::arg("bands"), py::arg("x"));

  m.def(
      "is_homogeneous",
      [](const Bands& b, double eta, std::size_t h_samples) {
        const HomogeneityReport r = is_homogeneous(to_bandset(b), eta, h_samples);
        py::dict d;
        d["holds"] = r.holds;
        d["worst_ratio"] = r.worst_ratio;
        d["witness"] = std::make_pair(r.witness_x, r.witness_h);
        return d;
      },
      py::arg("bands"), py::arg("eta"), py::arg("h_samples") = 64);

  py::class_<ReflectionlessFn>(m, "Reflectionless")
      .def(py::init([](const Bands& b, const std::vector<double>& divisor, std::optional<double> anchor) {
             return make_reflectionless(to_bandset(b), Divisor{divisor}, anchor);
           }),
           py::arg("bands"), py::arg("divisor"), py::arg("anchor") = py::none())
      .def_property_readonly("bands", [](const ReflectionlessFn& f) { return from_bandset(f.E); })
      .def_property_readonly("divisor", [](const ReflectionlessFn& f) { return f.divisor.points; })
      .def_property_readonly("anchor", [](const ReflectionlessFn& f) { return f.anchor; })
      .def("__call__", [](const ReflectionlessFn& f, cplx z) { return eval_R(f, z); }, py::arg("z"))
      .def("real", [](const ReflectionlessFn& f, double x) { return eval_R_real(f, x); }, py::arg("x"),
           "R on a gap or outside the hull.")
      .def("density", [](const ReflectionlessFn& f, double x) { return boundary_density(f, x); }, py::arg("x"))
      .def(
          "mass",
          [](const ReflectionlessFn& f, std::optional<std::pair<double, double>> arc) {
            return measure_mass(f, arc_or_all(f.E, arc));
          },
          py::arg("arc") = py::none(), "Absolutely continuous mass on `arc` (default: all bands).")
      .def("atom_mass", [](const ReflectionlessFn& f) { return f.anchor ? atom_mass_closed_form(f) : 0.0; });

  // Full traces go through the same serializers as the CLI.
  m.def(
      "build_pointmass_json",
      [](const std::string& overrides) { return pointmass_trace_json(run_pointmass(pointmass_config(config_from(overrides)))).dump(); },
      py::arg("config") = "");
  m.def(
      "build_sc_json",
      [](const std::string& overrides) {
        const ScTrace tr = run_sc(sc_config(config_from(overrides)));
        return sc_trace_json(tr, verify_masses(tr)).dump();
      },
      py::arg("config") = "");
  m.def(
      "verify_json",
      [](const std::vector<std::string>& ids, const std::string& overrides) {
        return acceptance_json(run_suite(ids, acceptance_options(config_from(overrides)))).dump();
      },
      py::arg("ids"), py::arg("config") = "");
  m.def("suite_ids", &suite_ids, py::arg("suite") = "all");
}
