#ifndef SEQTEST_DTEST_HPP
#define SEQTEST_DTEST_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqtest/labelmodel.hpp"
#include "seqtest/regressors.hpp"
#include "seqtest/series.hpp"

namespace seqtest {

enum class NullModel {
  mc_bootstrap,  // null labels drawn from the fitted Markov label model
  permutation    // null labels by uniform shuffle of the training labels
};

struct TestConfig {
  NullModel null_model = NullModel::mc_bootstrap;
  std::size_t replicates = 200;   // B
  unsigned markov_order = 4;      // k
  double smoothing = 0.5;         // Laplace alpha for the label model
  ChainInit chain_init = ChainInit::empirical_kgram;
  std::optional<double> bandwidth;  // NW bandwidth override
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  /// Optional custom regression method; defaults to Nadaraya-Watson.
  std::function<std::unique_ptr<Regressor>()> make_regressor;

  void validate() const;
  std::unique_ptr<Regressor> new_regressor() const;
};

struct TestReport {
  double lambda = 0.0;                      // sum of squared LPDs over V
  double p_value = 1.0;                     // (1 + #{replicate > lambda}) / (B+1)
  std::vector<double> lpds;                 // aligned with splits.v
  std::vector<double> replicate_lambdas;    // size B
  std::size_t fallback_count = 0;           // evaluation points with no kernel mass
};

/// lambda(s) = posterior(s) - prior per point; lambda = sum of squares.
std::pair<double, std::vector<double>> test_statistic(std::span<const double> posteriors,
                                                      double prior);

/// Monte Carlo p-value with strict exceedances: ties do not count.
double monte_carlo_pvalue(double lambda, std::span<const double> replicate_lambdas);

/// The full test: fit the prior and the posterior regression on T1, the
/// label model on T2 (bootstrap branch), then compare the statistic on the
/// evaluation points V against B null replicates with resampled labels.
/// Each replicate re-estimates prior and posterior from its drawn labels
/// (the same functional of a dataset as the observed statistic); regressor
/// refits reuse the original fit's hyperparameters.
TestReport run_test(const LabeledSeries& data, const SplitSpec& splits, const TestConfig& config);

/// Ball-restricted test of the local null on B(center; epsilon): the
/// statistic sums squared LPDs over evaluation points inside the ball,
/// the regression is fitted on the in-ball training observations only,
/// and null labels are drawn IID Bernoulli with the T2 label mean
/// (order-0 chain). Requires a regressor with bounded support. Returns
/// the local p-value.
double local_test(const LabeledSeries& data, const SplitSpec& splits, double center,
                  double epsilon, const TestConfig& config);

// Report CSV: a (lambda,p_value,fallback_count) header+row followed by a
// (v_index,s,lpd) section, one row per evaluation point.
void write_report_csv(std::ostream& out, const TestReport& report, const LabeledSeries& data,
                      const SplitSpec& splits);
void write_report_csv_file(const std::string& path, const TestReport& report,
                           const LabeledSeries& data, const SplitSpec& splits);

}  // namespace seqtest

#endif
