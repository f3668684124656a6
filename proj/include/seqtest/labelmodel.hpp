#ifndef SEQTEST_LABELMODEL_HPP
#define SEQTEST_LABELMODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seqtest/rng.hpp"

namespace seqtest {

enum class ChainInit {
  empirical_kgram,  // initial history drawn from the observed k-grams
  stationary        // initial history drawn from the fitted chain's stationary law
};

/// Order-k binary Markov chain over labels: the estimated marginal label
/// process used to draw null-hypothesis labels.
///
/// Histories are encoded as k-bit integers with the most recent label in
/// the least significant bit, so the chain update after emitting y is
/// h' = ((h << 1) | y) & (2^k - 1).
class MarkovLabelModel {
public:
  MarkovLabelModel() = default;  // unfitted; sample() throws until fitted

  /// Fit by transition counting with Laplace smoothing:
  ///   P(1 | h) = (count(h -> 1) + alpha) / (count(h -> .) + 2*alpha).
  /// Transitions are counted within each run only, never across run
  /// boundaries. Requires total label count > order.
  static MarkovLabelModel fit(const std::vector<std::vector<int>>& runs, unsigned order,
                              double alpha);
  static MarkovLabelModel fit(std::span<const int> labels, unsigned order, double alpha);

  unsigned order() const { return order_; }
  double smoothing() const { return alpha_; }
  std::size_t state_count() const { return probs_.size(); }

  double prob_one(std::uint32_t history) const { return probs_.at(history); }

  /// Observed k-grams (encoded), with multiplicity; the empirical
  /// initialization distribution.
  const std::vector<std::uint32_t>& observed_kgrams() const { return kgrams_; }

  /// Stationary distribution over the 2^k histories, by fixed-point
  /// iteration on the transition operator.
  std::vector<double> stationary() const;

  /// Exact long-run P(Y=1) of the fitted chain.
  double stationary_prob_one() const;

  /// Draw one label series of length n: initialize a history, discard
  /// 100*order burn-in draws, then emit n labels.
  std::vector<int> sample(std::size_t n, Rng& rng,
                          ChainInit init = ChainInit::empirical_kgram) const;

  /// Encode a chronological window (oldest label first) as a history.
  static std::uint32_t encode(std::span<const int> window);

  // CSV with header "history_bits,prob_one"; history bits are written
  // oldest-to-newest. Loaded models carry no observed k-grams, so they
  // sample with ChainInit::stationary only.
  void save_csv(std::ostream& out) const;
  void save_csv_file(const std::string& path) const;
  static MarkovLabelModel load_csv(std::istream& in, const std::string& name = "<stream>");
  static MarkovLabelModel load_csv_file(const std::string& path);

private:
  unsigned order_ = 0;
  double alpha_ = 0.0;
  std::vector<double> probs_;          // size 2^order
  std::vector<std::uint32_t> kgrams_;  // observed k-grams, with multiplicity
};

}  // namespace seqtest

#endif
