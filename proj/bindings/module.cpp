#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqtest/dtest.hpp"
#include "seqtest/eventlabel.hpp"
#include "seqtest/experiments.hpp"
#include "seqtest/labelmodel.hpp"
#include "seqtest/regressors.hpp"
#include "seqtest/rng.hpp"
#include "seqtest/series.hpp"
#include "seqtest/synthetic.hpp"

namespace py = pybind11;
using namespace seqtest;

PYBIND11_MODULE(seqtest, m) {
  m.doc() = "Bootstrap regression two-sample test for labeled sequence data";

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("uniform01", &Rng::uniform01)
      .def("normal", &Rng::normal)
      .def("bernoulli", &Rng::bernoulli, py::arg("p"));

  py::class_<LabeledSeries>(m, "LabeledSeries")
      .def(py::init<>())
      .def_readwrite("times", &LabeledSeries::times)
      .def_readwrite("covariates", &LabeledSeries::covariates)
      .def_readwrite("labels", &LabeledSeries::labels)
      .def("__len__", &LabeledSeries::size)
      .def("validate", &LabeledSeries::validate)
      .def("save_csv", &write_series_csv_file, py::arg("path"))
      .def_static("load_csv", &read_series_csv_file, py::arg("path"));

  py::class_<SplitSpec>(m, "SplitSpec")
      .def(py::init<>())
      .def_readwrite("t1", &SplitSpec::t1)
      .def_readwrite("t2", &SplitSpec::t2)
      .def_readwrite("v", &SplitSpec::v)
      .def("validate", &SplitSpec::validate, py::arg("series_length"));

  py::enum_<SplitMode>(m, "SplitMode")
      .value("contiguous_blocks", SplitMode::contiguous_blocks)
      .value("interleaved", SplitMode::interleaved);

  m.def(
      "split_series",
      [](const LabeledSeries& series, const std::array<double, 3>& fractions, Rng& rng,
         SplitMode mode) { return split_series(series, fractions, rng, mode); },
      py::arg("series"), py::arg("fractions"), py::arg("rng"),
      py::arg("mode") = SplitMode::contiguous_blocks);

  py::class_<SyntheticConfig>(m, "SyntheticConfig")
      .def(py::init<>())
      .def_readwrite("n", &SyntheticConfig::n)
      .def_readwrite("gamma", &SyntheticConfig::gamma)
      .def_readwrite("delta", &SyntheticConfig::delta)
      .def_readwrite("phi", &SyntheticConfig::phi)
      .def_readwrite("phi_prime", &SyntheticConfig::phi_prime)
      .def_readwrite("seed", &SyntheticConfig::seed);

  m.def("simulate_ar1", &simulate_ar1, py::arg("n"), py::arg("phi"), py::arg("rng"));
  m.def("hard_threshold", &hard_threshold, py::arg("s"), py::arg("delta"));
  m.def("logistic", &logistic, py::arg("x"));
  m.def("generate", &generate, py::arg("config"));

  py::class_<PriorEstimate>(m, "PriorEstimate")
      .def_readonly("value", &PriorEstimate::value)
      .def_readonly("n", &PriorEstimate::n);
  m.def(
      "estimate_prior",
      [](const std::vector<int>& labels) { return estimate_prior(labels); },
      py::arg("labels"));
  m.def(
      "nw_bandwidth", [](const std::vector<double>& s) { return nw_bandwidth(s); },
      py::arg("s"));

  py::class_<NadarayaWatson>(m, "NadarayaWatson")
      .def(py::init<>())
      .def(py::init<double>(), py::arg("bandwidth"))
      .def(
          "fit",
          [](NadarayaWatson& self, const std::vector<double>& s, const std::vector<double>& y) {
            self.fit(s, y);
          },
          py::arg("s"), py::arg("y"))
      .def(
          "predict", [](const NadarayaWatson& self, double q) { return self.predict(q); },
          py::arg("query"))
      .def("bandwidth", &NadarayaWatson::bandwidth)
      .def("fallback", &NadarayaWatson::fallback);

  py::enum_<ChainInit>(m, "ChainInit")
      .value("empirical_kgram", ChainInit::empirical_kgram)
      .value("stationary", ChainInit::stationary);

  py::class_<MarkovLabelModel>(m, "MarkovLabelModel")
      .def_static(
          "fit",
          [](const std::vector<int>& labels, unsigned order, double alpha) {
            return MarkovLabelModel::fit(labels, order, alpha);
          },
          py::arg("labels"), py::arg("order"), py::arg("alpha") = 0.5)
      .def_static(
          "fit_runs",
          [](const std::vector<std::vector<int>>& runs, unsigned order, double alpha) {
            return MarkovLabelModel::fit(runs, order, alpha);
          },
          py::arg("runs"), py::arg("order"), py::arg("alpha") = 0.5)
      .def("order", &MarkovLabelModel::order)
      .def("prob_one", &MarkovLabelModel::prob_one, py::arg("history"))
      .def("stationary", &MarkovLabelModel::stationary)
      .def("stationary_prob_one", &MarkovLabelModel::stationary_prob_one)
      .def("sample", &MarkovLabelModel::sample, py::arg("n"), py::arg("rng"),
           py::arg("init") = ChainInit::empirical_kgram)
      .def("save_csv", &MarkovLabelModel::save_csv_file, py::arg("path"))
      .def_static("load_csv", &MarkovLabelModel::load_csv_file, py::arg("path"));

  py::enum_<NullModel>(m, "NullModel")
      .value("mc_bootstrap", NullModel::mc_bootstrap)
      .value("permutation", NullModel::permutation);

  py::class_<TestConfig>(m, "TestConfig")
      .def(py::init<>())
      .def_readwrite("null_model", &TestConfig::null_model)
      .def_readwrite("replicates", &TestConfig::replicates)
      .def_readwrite("markov_order", &TestConfig::markov_order)
      .def_readwrite("smoothing", &TestConfig::smoothing)
      .def_readwrite("chain_init", &TestConfig::chain_init)
      .def_readwrite("bandwidth", &TestConfig::bandwidth)
      .def_readwrite("seed", &TestConfig::seed)
      .def_readwrite("threads", &TestConfig::threads);

  py::class_<TestReport>(m, "TestReport")
      .def_readonly("lambda_", &TestReport::lambda)
      .def_readonly("p_value", &TestReport::p_value)
      .def_readonly("lpds", &TestReport::lpds)
      .def_readonly("replicate_lambdas", &TestReport::replicate_lambdas)
      .def_readonly("fallback_count", &TestReport::fallback_count);

  m.def(
      "test_statistic",
      [](const std::vector<double>& posteriors, double prior) {
        return test_statistic(posteriors, prior);
      },
      py::arg("posteriors"), py::arg("prior"));
  m.def(
      "monte_carlo_pvalue",
      [](double lambda, const std::vector<double>& replicate_lambdas) {
        return monte_carlo_pvalue(lambda, replicate_lambdas);
      },
      py::arg("lambda_"), py::arg("replicate_lambdas"));
  m.def("run_test", &run_test, py::arg("data"), py::arg("splits"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("local_test", &local_test, py::arg("data"), py::arg("splits"), py::arg("center"),
        py::arg("epsilon"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::enum_<EventDirection>(m, "EventDirection")
      .value("rapid_intensification", EventDirection::rapid_intensification)
      .value("rapid_weakening", EventDirection::rapid_weakening);

  py::class_<IntensitySeries>(m, "IntensitySeries")
      .def(py::init<>())
      .def_readwrite("times", &IntensitySeries::times)
      .def_readwrite("intensities", &IntensitySeries::intensities)
      .def("validate", &IntensitySeries::validate)
      .def_static("load_csv", &read_intensity_csv_file, py::arg("path"));

  py::class_<EventLabels>(m, "EventLabels")
      .def_readonly("times", &EventLabels::times)
      .def_readonly("labels", &EventLabels::labels)
      .def_readonly("direction", &EventLabels::direction)
      .def_readonly("threshold", &EventLabels::threshold);

  py::class_<FineLabels>(m, "FineLabels")
      .def_readonly("times", &FineLabels::times)
      .def_readonly("labels", &FineLabels::labels);

  m.def("label_rapid_events", &label_rapid_events, py::arg("series"), py::arg("threshold"),
        py::arg("direction"));
  m.def("interpolate_labels", &interpolate_labels, py::arg("synoptic"),
        py::arg("steps_per_interval"));
  m.def(
      "decimate_labels",
      [](const std::vector<int>& labels, std::size_t stride) {
        return decimate_labels(labels, stride);
      },
      py::arg("labels"), py::arg("stride"));
  m.def("genesis_lysis_trim", &genesis_lysis_trim, py::arg("series"),
        py::arg("min_intensity") = 35.0);

  py::class_<OracleDifference>(m, "OracleDifference")
      .def_readonly("bayes", &OracleDifference::bayes)
      .def_readonly("scaled_density", &OracleDifference::scaled_density);
  m.def(
      "oracle_posterior_difference",
      [](const std::vector<double>& p1, const std::vector<double>& p0, double pi,
         std::size_t index) { return oracle_posterior_difference(p1, p0, pi, index); },
      py::arg("p_given_1"), py::arg("p_given_0"), py::arg("pi"), py::arg("index"));

  m.def("true_posterior", &true_posterior, py::arg("s"), py::arg("gamma"), py::arg("delta"));
  m.def("true_prior", &true_prior, py::arg("gamma"), py::arg("delta"));
  m.def("true_lpd", &true_lpd, py::arg("s"), py::arg("gamma"), py::arg("delta"));
  m.def(
      "ks_statistic_uniform",
      [](std::vector<double> values) { return ks_statistic_uniform(std::move(values)); },
      py::arg("values"));
}
