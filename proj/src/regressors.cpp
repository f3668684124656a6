#include "seqtest/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seqtest {

PriorEstimate estimate_prior(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("estimate_prior: empty label set");
  std::size_t ones = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("estimate_prior: labels must be 0 or 1");
    ones += static_cast<std::size_t>(y);
  }
  return {static_cast<double>(ones) / static_cast<double>(labels.size()), labels.size()};
}

double nw_bandwidth(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n < 2) throw std::invalid_argument("nw_bandwidth: need at least 2 training points");
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : s) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd <= 0.0)
    throw std::invalid_argument(
        "nw_bandwidth: constant covariates (sd = 0); set the bandwidth explicitly");
  return sd / std::pow(static_cast<double>(n), 0.2);
}

NadarayaWatson::NadarayaWatson(double bandwidth) : fixed_bandwidth_(bandwidth) {
  if (bandwidth <= 0.0) throw std::invalid_argument("NadarayaWatson: bandwidth must be > 0");
}

void NadarayaWatson::fit(std::span<const double> s, std::span<const double> y) {
  if (s.size() != y.size())
    throw std::invalid_argument("NadarayaWatson::fit: s and y must have equal length");
  if (s.empty()) throw std::invalid_argument("NadarayaWatson::fit: empty training set");
  bandwidth_ = fixed_bandwidth_ ? *fixed_bandwidth_ : nw_bandwidth(s);

  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  xs_.resize(s.size());
  ys_.resize(s.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    xs_[i] = s[order[i]];
    ys_[i] = y[order[i]];
  }
  fallback_ = std::accumulate(ys_.begin(), ys_.end(), 0.0) / static_cast<double>(ys_.size());
}

double NadarayaWatson::predict(double query, bool* used_fallback) const {
  if (xs_.empty()) throw std::logic_error("NadarayaWatson::predict: not fitted");
  if (used_fallback) *used_fallback = false;
  // Only points with |query - x| < h carry weight; the kernel vanishes on
  // the boundary.
  const auto lo = std::upper_bound(xs_.begin(), xs_.end(), query - bandwidth_);
  const auto hi = std::lower_bound(lo, xs_.end(), query + bandwidth_);
  double num = 0.0, den = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double u = (query - *it) / bandwidth_;
    const double w = 0.75 * (1.0 - u * u);
    num += w * ys_[static_cast<std::size_t>(it - xs_.begin())];
    den += w;
  }
  if (den <= 0.0) {
    if (used_fallback) *used_fallback = true;
    return fallback_;
  }
  return std::clamp(num / den, 0.0, 1.0);
}

std::unique_ptr<Regressor> NadarayaWatson::replicate_template() const {
  auto copy = std::make_unique<NadarayaWatson>();
  // Freeze the bandwidth resolved at the original fit.
  if (bandwidth_ > 0.0) copy->fixed_bandwidth_ = bandwidth_;
  else copy->fixed_bandwidth_ = fixed_bandwidth_;
  return copy;
}

NadarayaWatson fit_nw(std::span<const double> s, std::span<const double> y,
                      std::optional<double> bandwidth) {
  NadarayaWatson nw = bandwidth ? NadarayaWatson(*bandwidth) : NadarayaWatson();
  nw.fit(s, y);
  return nw;
}

}  // namespace seqtest
