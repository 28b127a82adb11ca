#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unseen/baselines.hpp"
#include "unseen/error.hpp"
#include "unseen/estimators.hpp"
#include "unseen/harness.hpp"
#include "unseen/oracles.hpp"
#include "unseen/prevalence.hpp"
#include "unseen/sampling.hpp"
#include "unseen/smoothing.hpp"

namespace py = pybind11;
using namespace unseen;

namespace {

SamplingModel model_arg(const std::string& name) { return parse_model(name); }

}  // namespace

PYBIND11_MODULE(_unseen, m) {
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "UnseenError");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<SchemeError>(m, "SchemeError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<TrialFailure>(m, "TrialFailure", base.ptr());

  py::class_<PrevalenceHistogram>(m, "Histogram")
      .def(py::init<>())
      .def_static("from_prevalences", &PrevalenceHistogram::from_prevalences, py::arg("entries"))
      .def_static(
          "from_counts",
          [](const std::vector<std::uint64_t>& counts) { return PrevalenceHistogram::from_counts(counts); },
          py::arg("counts"))
      .def_static("from_chars", &build_histogram_from_chars, py::arg("text"))
      .def_static("read_csv", &read_histogram_csv_file, py::arg("path"))
      .def("prevalence", &PrevalenceHistogram::prevalence)
      .def_property_readonly("max_index", &PrevalenceHistogram::max_index)
      .def_property_readonly("observed", &PrevalenceHistogram::observed_count)
      .def_property_readonly("sample_size", &PrevalenceHistogram::sample_size)
      .def("entries", &PrevalenceHistogram::entries)
      .def("to_csv",
           [](const PrevalenceHistogram& h) {
             std::ostringstream out;
             write_histogram_csv(out, h);
             return out.str();
           })
      .def("__eq__", [](const PrevalenceHistogram& a, const PrevalenceHistogram& b) { return a == b; });

  py::class_<SmoothingDistribution>(m, "Smoothing")
      .def_static("poisson", &SmoothingDistribution::poisson, py::arg("rate"))
      .def_static("binomial", &SmoothingDistribution::binomial, py::arg("trials"), py::arg("success"))
      .def_static("deterministic", &SmoothingDistribution::deterministic, py::arg("cutoff"))
      .def_static("infinite", &SmoothingDistribution::infinite)
      .def_static("custom", &SmoothingDistribution::custom, py::arg("pmf"))
      .def("tail", &SmoothingDistribution::tail)
      .def("expected_t_power", &SmoothingDistribution::expected_t_power)
      .def("signed_moment", &SmoothingDistribution::signed_moment)
      .def("xi_bound", &SmoothingDistribution::xi_bound)
      .def("__repr__", &SmoothingDistribution::describe);

  m.def("good_toulmin", &good_toulmin, py::arg("hist"), py::arg("t"));
  m.def("truncated_gt", &truncated_gt, py::arg("hist"), py::arg("t"), py::arg("ell"));
  m.def("sgt_estimate", &sgt_estimate, py::arg("hist"), py::arg("smoothing"), py::arg("t"));
  m.def(
      "sgt_coefficients",
      [](const SmoothingDistribution& law, double t, std::uint64_t imax) {
        return sgt_coefficients(law, t, imax).coefficients();
      },
      py::arg("smoothing"), py::arg("t"), py::arg("imax"));
  m.def(
      "auto_params",
      [](std::uint64_t n, double t, const std::string& scheme) { return auto_params(n, t, parse_scheme(scheme)); },
      py::arg("n"), py::arg("t"), py::arg("scheme"));
  m.def(
      "estimate_unseen",
      [](const PrevalenceHistogram& h, double t, const std::string& scheme, bool clamp) {
        return estimate_unseen(h, t, parse_scheme(scheme), clamp).value;
      },
      py::arg("hist"), py::arg("t"), py::arg("scheme") = "binomial-opt", py::arg("clamp") = true);
  m.def(
      "baseline_unseen",
      [](const PrevalenceHistogram& h, double t, const std::string& kind) {
        const auto r = baseline_unseen(h, t, BaselineKind::parse(kind));
        return py::make_tuple(r.value, r.warning);
      },
      py::arg("hist"), py::arg("t"), py::arg("kind"));

  m.def(
      "estimate_json",
      [](const PrevalenceHistogram& h, const std::string& source, double t, const std::string& scheme, bool clamp,
         const std::vector<std::string>& baselines) {
        return estimate_json(run_estimate(h, source, t, scheme, clamp, baselines));
      },
      py::arg("hist"), py::arg("source"), py::arg("t"), py::arg("scheme") = "binomial-opt",
      py::arg("clamp") = true, py::arg("baselines") = std::vector<std::string>{});

  m.def(
      "nmse_csv",
      [](const std::string& population, const std::string& model, std::uint64_t n, const std::vector<double>& t_grid,
         const std::vector<std::string>& estimators, std::uint64_t trials, std::uint64_t seed, bool clamp,
         unsigned threads) {
        ExperimentConfig c;
        c.model = model_arg(model);
        c.population = population;
        c.n = n;
        c.t_grid = t_grid;
        c.estimators = estimators;
        c.trials = trials;
        c.seed = seed;
        c.clamp = clamp;
        c.threads = threads;
        std::ostringstream out;
        write_nmse_csv(out, run_nmse(c).rows);
        return out.str();
      },
      py::arg("population"), py::arg("model"), py::arg("n"), py::arg("t_grid"), py::arg("estimators"),
      py::arg("trials") = 100, py::arg("seed") = 0, py::arg("clamp") = true, py::arg("threads") = 0);

  m.def(
      "curve_json",
      [](const std::string& population, const std::string& model, std::uint64_t n, const std::vector<double>& t_grid,
         const std::vector<std::string>& estimators, std::uint64_t trials, std::uint64_t seed, bool clamp) {
        CurveConfig c;
        c.model = model_arg(model);
        c.population = population;
        c.n = n;
        c.t_grid = t_grid;
        c.estimators = estimators;
        c.trials = trials;
        c.seed = seed;
        c.clamp = clamp;
        return curve_json(c, discovery_curve(c).rows);
      },
      py::arg("population"), py::arg("model"), py::arg("n"), py::arg("t_grid"), py::arg("estimators"),
      py::arg("trials") = 100, py::arg("seed") = 0, py::arg("clamp") = true);

  m.def(
      "ingest",
      [](const std::string& text, bool lowercase) {
        const Corpus c = ingest_corpus(text, lowercase);
        const auto counts = c.counts();
        py::dict out;
        for (std::size_t i = 0; i < counts.size(); ++i) out[py::str(c.vocabulary[i])] = counts[i];
        return out;
      },
      py::arg("text"), py::arg("lowercase") = true);

  m.def(
      "simulate",
      [](const std::string& population, const std::string& model, std::uint64_t n, std::uint64_t m_new,
         std::uint64_t seed) {
        const auto r = run_simulation(population, model_arg(model), n, m_new, seed);
        return py::make_tuple(r.histogram, r.unseen);
      },
      py::arg("population"), py::arg("model"), py::arg("n"), py::arg("m"), py::arg("seed"));

  m.def(
      "verify_json", [](std::uint64_t seed, unsigned threads) { return verification_json(verify_all(seed, threads), seed); },
      py::arg("seed"), py::arg("threads") = 0);
}
