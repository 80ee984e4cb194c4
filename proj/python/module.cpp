#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cyclic/catalan.hpp"
#include "cyclic/cli.hpp"
#include "cyclic/cone.hpp"
#include "cyclic/error.hpp"
#include "cyclic/io.hpp"
#include "cyclic/vr.hpp"

namespace py = pybind11;
using namespace cyclic;

namespace {

std::pair<std::string, std::string> fraction(const ExactRational& x) {
  return {to_string(numerator_of(x)), to_string(denominator_of(x))};
}

SampleSet points_of(const std::vector<Tick>& ticks) { return SampleSet::from_unsorted(ticks); }

std::string analyze(const std::vector<Tick>& ticks, const std::string& r_text, unsigned i_max) {
  const auto r = Scale::parse(r_text);
  const auto sys = build_map(points_of(ticks), r);
  const auto levels = periodic_and_levels(sys);
  Json doc{{"r", to_json(r)},
           {"ticks", to_json(sys.points())["ticks"]},
           {"successors", std::vector<Index>(sys.successors().begin(), sys.successors().end())},
           {"levels", to_json(levels.histogram)},
           {"orbits", to_json(orbit_report(sys, levels))}};
  if (r.is_rational() && r.q() >= 2) doc["swift"] = to_json(swiftness_types(sys, i_max));
  return doc.dump();
}

std::string vr(const std::vector<Tick>& ticks, const std::string& r_text) {
  const auto res = analyze_vr(points_of(ticks), Scale::parse(r_text));
  return Json{{"n", res.n},
              {"core_size", res.core_size},
              {"orbits", to_json(res.orbits)},
              {"homotopy", to_json(res.homotopy)},
              {"core_is_periodic_set", res.core_is_periodic_set}}
      .dump();
}

std::string simulate(std::uint64_t n, const std::string& r_text, std::uint64_t trials, std::uint64_t seed,
                     unsigned i_max, unsigned workers, bool rows) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.r = Scale::parse(r_text);
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.i_max = i_max;
  cfg.workers = workers;
  cfg.stats.swift = cfg.r.is_rational() && cfg.r.q() >= 2;
  return experiment_to_json(cfg, run_experiment(cfg), rows, "").dump();
}

std::tuple<int, std::string, std::string> run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_cyclic, m) {
  static py::exception<Error> error(m, "CyclicError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def("sample_uniform", [](std::size_t n, std::uint64_t seed, std::uint64_t index) {
    auto rng = make_stream(seed, index);
    const auto set = sample_uniform(n, rng);
    return std::vector<Tick>(set.ticks().begin(), set.ticks().end());
  }, py::arg("n"), py::arg("seed"), py::arg("index") = 0);
  m.def("scale_json", [](const std::string& r) { return to_json(Scale::parse(r)).dump(); });
  m.def("analyze", &analyze, py::arg("ticks"), py::arg("r"), py::arg("i_max") = kDefaultIMax);
  m.def("vr", &vr, py::arg("ticks"), py::arg("r"));
  m.def("simulate", &simulate, py::arg("n"), py::arg("r"), py::arg("trials"), py::arg("seed"),
        py::arg("i_max") = kDefaultIMax, py::arg("workers") = 1, py::arg("rows") = true);
  m.def("catalan", [](unsigned i) { return to_string(catalan(i)); });
  m.def("catalan_bounded", [](unsigned i, int h) { return to_string(catalan_bounded(i, h)); });
  m.def("catalan_prime", [](unsigned i, int h) { return to_string(catalan_prime(i, h)); });
  m.def("predicted_level_fraction",
        [](unsigned i, const std::string& r) { return fraction(predicted_level_fraction(i, Scale::parse(r))); });
  m.def("predicted_periodic_fraction",
        [](const std::string& r) { return fraction(predicted_periodic_fraction(Scale::parse(r))); });
  m.def("cone_exact", [](const std::string& family, unsigned i, std::optional<unsigned> q) {
    return fraction(exact_integral(build_cone(parse_family(family), i, q)));
  }, py::arg("family"), py::arg("i"), py::arg("q") = py::none());
  m.def("run_cli", &run_cli, py::arg("args"));
}
