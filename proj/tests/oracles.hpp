#ifndef SEQTEST_TESTS_ORACLES_HPP
#define SEQTEST_TESTS_ORACLES_HPP

// Independent reference implementations used to cross-check the library.
// Everything here is written from first principles (direct sums, explicit
// enumeration) and deliberately avoids the code paths it verifies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracles {

/// Nadaraya-Watson prediction by a direct sum over the training points in
/// their original order (no sorting, no search structure).
inline double nw_direct(const std::vector<double>& s, const std::vector<double>& y,
                        double bandwidth, double fallback, double query) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double u = (query - s[i]) / bandwidth;
    if (std::abs(u) >= 1.0) continue;
    const double w = 0.75 * (1.0 - u * u);
    num += w * y[i];
    den += w;
  }
  if (den <= 0.0) return fallback;
  return std::min(1.0, std::max(0.0, num / den));
}

/// Transition probabilities of an order-k binary chain by explicit history
/// slicing: for every position, rebuild the history from scratch.
/// Returns P(1 | h) for h = 0..2^k-1, with unobserved histories mapped to
/// the smoothed value ((0+alpha)/(0+2alpha), i.e. 1/2 when alpha = 0).
inline std::vector<double> markov_mle_direct(const std::vector<std::vector<int>>& runs,
                                             unsigned k, double alpha) {
  const std::size_t states = std::size_t{1} << k;
  std::vector<double> count(states, 0.0), ones(states, 0.0);
  for (const auto& run : runs) {
    for (std::size_t t = k; t < run.size(); ++t) {
      std::size_t h = 0;
      // oldest lag in the most significant bit
      for (unsigned j = 0; j < k; ++j)
        h = (h << 1) | static_cast<std::size_t>(run[t - k + j]);
      count[h] += 1.0;
      ones[h] += run[t];
    }
  }
  std::vector<double> probs(states);
  for (std::size_t h = 0; h < states; ++h)
    probs[h] = count[h] + 2.0 * alpha > 0.0 ? (ones[h] + alpha) / (count[h] + 2.0 * alpha) : 0.5;
  return probs;
}

/// Rapid-event intervals by explicit enumeration, following the prose:
/// flag every 24-hour (5-point) window whose rise from the first point
/// reaches the threshold, then shrink it point by point until it begins
/// and ends with a rising 6-hour step. Returns the surviving [lo, hi]
/// point intervals, one per flagged window.
inline std::vector<std::pair<std::size_t, std::size_t>> rapid_intervals_bruteforce(
    const std::vector<double>& w, double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> intervals;
  if (w.size() < 5) return intervals;
  for (std::size_t t = 0; t + 4 < w.size(); ++t) {
    double peak = w[t];
    for (std::size_t j = t; j <= t + 4; ++j) peak = std::max(peak, w[j]);
    if (peak - w[t] < threshold) continue;
    std::size_t lo = t, hi = t + 4;
    while (hi > lo && !(w[hi] > w[hi - 1])) --hi;
    while (lo < hi && !(w[lo + 1] > w[lo])) ++lo;
    intervals.emplace_back(lo, hi);
  }
  return intervals;
}

inline std::vector<int> rapid_labels_bruteforce(const std::vector<double>& w, double threshold) {
  std::vector<int> labels(w.size(), 0);
  for (const auto& [lo, hi] : rapid_intervals_bruteforce(w, threshold))
    for (std::size_t j = lo; j <= hi; ++j) labels[j] = 1;
  return labels;
}

/// Adaptive Simpson quadrature; independent route for the Gauss rules.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
  const auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  std::function<double(double, double, double, int)> recurse = [&](double lo, double hi,
                                                                   double whole, int d) {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid), right = simpson(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
    return recurse(lo, mid, left, d - 1) + recurse(mid, hi, right, d - 1);
  };
  return recurse(a, b, simpson(a, b), depth);
}

inline double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

inline double lag1_autocorrelation(const std::vector<double>& v) {
  const double m = mean(v);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < v.size(); ++t) {
    den += (v[t] - m) * (v[t] - m);
    if (t + 1 < v.size()) num += (v[t] - m) * (v[t + 1] - m);
  }
  return num / den;
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(va * vb);
}

}  // namespace oracles

#endif
