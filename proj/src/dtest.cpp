#include "seqtest/dtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "seqtest/parallel.hpp"

namespace seqtest {

void TestConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("TestConfig: replicates must be >= 1");
  if (smoothing < 0.0) throw std::invalid_argument("TestConfig: smoothing must be >= 0");
  if (bandwidth && *bandwidth <= 0.0)
    throw std::invalid_argument("TestConfig: bandwidth must be > 0");
}

std::unique_ptr<Regressor> TestConfig::new_regressor() const {
  if (make_regressor) return make_regressor();
  if (bandwidth) return std::make_unique<NadarayaWatson>(*bandwidth);
  return std::make_unique<NadarayaWatson>();
}

std::pair<double, std::vector<double>> test_statistic(std::span<const double> posteriors,
                                                      double prior) {
  if (prior < 0.0 || prior > 1.0)
    throw std::invalid_argument("test_statistic: prior must be in [0,1]");
  std::vector<double> lpds(posteriors.size());
  double lambda = 0.0;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    if (posteriors[i] < 0.0 || posteriors[i] > 1.0)
      throw std::invalid_argument("test_statistic: posteriors must be in [0,1]");
    lpds[i] = posteriors[i] - prior;
    lambda += lpds[i] * lpds[i];
  }
  return {lambda, std::move(lpds)};
}

double monte_carlo_pvalue(double lambda, std::span<const double> replicate_lambdas) {
  if (replicate_lambdas.empty())
    throw std::invalid_argument("monte_carlo_pvalue: need at least one replicate");
  std::size_t exceed = 0;
  for (double rl : replicate_lambdas)
    if (rl > lambda) ++exceed;  // strict: ties favor the larger p-value
  return static_cast<double>(1 + exceed) / static_cast<double>(replicate_lambdas.size() + 1);
}

namespace {

struct Gathered {
  std::vector<double> s;
  std::vector<double> y;
  std::vector<int> labels;
};

Gathered gather(const LabeledSeries& data, const std::vector<std::size_t>& idx) {
  Gathered g;
  g.s.reserve(idx.size());
  g.y.reserve(idx.size());
  g.labels.reserve(idx.size());
  for (std::size_t i : idx) {
    g.s.push_back(data.covariates[i]);
    g.y.push_back(static_cast<double>(data.labels[i]));
    g.labels.push_back(data.labels[i]);
  }
  return g;
}

double replicate_lambda(const Regressor& reg, std::span<const double> eval_s, double prior) {
  double lambda = 0.0;
  for (double s : eval_s) {
    const double d = reg.predict(s) - prior;
    lambda += d * d;
  }
  return lambda;
}

}  // namespace

TestReport run_test(const LabeledSeries& data, const SplitSpec& splits, const TestConfig& config) {
  config.validate();
  data.validate();
  splits.validate(data.size());
  if (splits.t1.empty()) throw std::invalid_argument("run_test: empty training set");
  if (splits.v.empty()) throw std::invalid_argument("run_test: empty evaluation set");
  if (config.null_model == NullModel::mc_bootstrap && splits.t2.empty())
    throw std::invalid_argument("run_test: bootstrap null requires a nonempty holdout set");

  const Gathered train = gather(data, splits.t1);
  const double prior = estimate_prior(train.labels).value;

  auto regressor = config.new_regressor();
  regressor->fit(train.s, train.y);

  std::vector<double> eval_s;
  eval_s.reserve(splits.v.size());
  for (std::size_t i : splits.v) eval_s.push_back(data.covariates[i]);

  TestReport report;
  std::vector<double> posteriors(eval_s.size());
  for (std::size_t j = 0; j < eval_s.size(); ++j) {
    bool fb = false;
    posteriors[j] = regressor->predict(eval_s[j], &fb);
    if (fb) ++report.fallback_count;
  }
  std::tie(report.lambda, report.lpds) = test_statistic(posteriors, prior);

  MarkovLabelModel label_model;
  if (config.null_model == NullModel::mc_bootstrap) {
    std::vector<std::vector<int>> runs;
    for (const auto& [first, len] : contiguous_runs(splits.t2))
      runs.emplace_back(data.labels.begin() + static_cast<std::ptrdiff_t>(first),
                        data.labels.begin() + static_cast<std::ptrdiff_t>(first + len));
    label_model = MarkovLabelModel::fit(runs, config.markov_order, config.smoothing);
  }
  // One independent chain per contiguous training run.
  const auto train_runs = contiguous_runs(splits.t1);

  report.replicate_lambdas.resize(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t b) {
    Rng rng(config.seed, b + 1);
    std::vector<double> null_y;
    if (config.null_model == NullModel::mc_bootstrap) {
      null_y.reserve(train.y.size());
      for (const auto& [first, len] : train_runs) {
        (void)first;
        const auto drawn = label_model.sample(len, rng, config.chain_init);
        for (int y : drawn) null_y.push_back(static_cast<double>(y));
      }
    } else {
      null_y = train.y;
      rng.shuffle(null_y);
    }
    // The null statistic must be the same functional of a dataset as the
    // observed one, so the prior is re-estimated from the drawn labels;
    // against a fixed prior the replicates would carry an extra
    // |V|*(mean shift)^2 term the observed statistic lacks.
    double prior_b = 0.0;
    for (double y : null_y) prior_b += y;
    prior_b /= static_cast<double>(null_y.size());
    auto reg_b = regressor->replicate_template();
    reg_b->fit(train.s, null_y);
    report.replicate_lambdas[b] = replicate_lambda(*reg_b, eval_s, prior_b);
  });

  report.p_value = monte_carlo_pvalue(report.lambda, report.replicate_lambdas);
  return report;
}

double local_test(const LabeledSeries& data, const SplitSpec& splits, double center,
                  double epsilon, const TestConfig& config) {
  config.validate();
  data.validate();
  splits.validate(data.size());
  if (epsilon <= 0.0) throw std::invalid_argument("local_test: epsilon must be > 0");
  if (splits.t1.empty()) throw std::invalid_argument("local_test: empty training set");
  if (splits.t2.empty()) throw std::invalid_argument("local_test: empty holdout set");

  std::vector<double> ball_s;
  for (std::size_t i : splits.v)
    if (std::abs(data.covariates[i] - center) <= epsilon) ball_s.push_back(data.covariates[i]);
  if (ball_s.empty())
    throw std::invalid_argument("local_test: no evaluation points inside the ball");

  const Gathered train = gather(data, splits.t1);
  const double prior = estimate_prior(train.labels).value;

  // The local null only constrains the posterior inside the ball, so the
  // regression may use in-ball observations only; otherwise kernel windows
  // of near-edge queries would import signal from outside the ball.
  std::vector<std::size_t> ball_train;  // positions within splits.t1
  for (std::size_t j = 0; j < train.s.size(); ++j)
    if (std::abs(train.s[j] - center) <= epsilon) ball_train.push_back(j);
  if (ball_train.empty())
    throw std::invalid_argument("local_test: no training observations inside the ball");
  std::vector<double> ball_train_s(ball_train.size()), ball_train_y(ball_train.size());
  for (std::size_t j = 0; j < ball_train.size(); ++j) {
    ball_train_s[j] = train.s[ball_train[j]];
    ball_train_y[j] = train.y[ball_train[j]];
  }

  auto regressor = config.new_regressor();
  regressor->fit(ball_train_s, ball_train_y);
  if (!regressor->support_radius())
    throw std::invalid_argument("local_test: requires a regressor with bounded support");

  const double lambda = replicate_lambda(*regressor, ball_s, prior);

  // IID Bernoulli null with the holdout label mean (order-0 chain).
  std::vector<int> holdout_labels;
  holdout_labels.reserve(splits.t2.size());
  for (std::size_t i : splits.t2) holdout_labels.push_back(data.labels[i]);
  const double p_null = estimate_prior(holdout_labels).value;

  std::vector<double> replicate_lambdas(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t b) {
    Rng rng(config.seed, b + 1);
    // one draw per training point; the prior is re-estimated from all of
    // them, the regression refit from the in-ball subset
    std::vector<double> null_y(train.y.size());
    double prior_b = 0.0;
    for (double& y : null_y) {
      y = rng.bernoulli(p_null) ? 1.0 : 0.0;
      prior_b += y;
    }
    prior_b /= static_cast<double>(null_y.size());
    std::vector<double> null_ball_y(ball_train.size());
    for (std::size_t j = 0; j < ball_train.size(); ++j)
      null_ball_y[j] = null_y[ball_train[j]];
    auto reg_b = regressor->replicate_template();
    reg_b->fit(ball_train_s, null_ball_y);
    replicate_lambdas[b] = replicate_lambda(*reg_b, ball_s, prior_b);
  });

  return monte_carlo_pvalue(lambda, replicate_lambdas);
}

void write_report_csv(std::ostream& out, const TestReport& report, const LabeledSeries& data,
                      const SplitSpec& splits) {
  out.precision(17);
  out << "lambda,p_value,fallback_count\n";
  out << report.lambda << ',' << report.p_value << ',' << report.fallback_count << '\n';
  out << "v_index,s,lpd\n";
  for (std::size_t j = 0; j < splits.v.size(); ++j)
    out << splits.v[j] << ',' << data.covariates[splits.v[j]] << ',' << report.lpds[j] << '\n';
}

void write_report_csv_file(const std::string& path, const TestReport& report,
                           const LabeledSeries& data, const SplitSpec& splits) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_report_csv(out, report, data, splits);
}

}  // namespace seqtest
