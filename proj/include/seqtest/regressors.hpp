#ifndef SEQTEST_REGRESSORS_HPP
#define SEQTEST_REGRESSORS_HPP

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace seqtest {

/// Class prior estimate (label proportion).
struct PriorEstimate {
  double value = 0.0;
  std::size_t n = 0;
};

PriorEstimate estimate_prior(std::span<const int> labels);

/// Rule-of-thumb bandwidth: sample standard deviation of s divided by
/// n^{1/5}. Throws for n < 2 or constant covariates; set the bandwidth
/// explicitly in those cases.
double nw_bandwidth(std::span<const double> s);

/// Seam consumed by the test: any regression method exposing fit/predict.
/// Implementations whose predictions at a query depend only on training
/// points within a bounded radius report that radius via support_radius();
/// the ball-based local test requires it.
class Regressor {
public:
  virtual ~Regressor() = default;

  virtual void fit(std::span<const double> s, std::span<const double> y) = 0;

  /// Prediction in [0,1]. Sets *used_fallback when the method had no
  /// training information at the query and fell back to a constant.
  virtual double predict(double query, bool* used_fallback = nullptr) const = 0;

  /// Radius of the training neighborhood a prediction can depend on;
  /// nullopt for global methods.
  virtual std::optional<double> support_radius() const = 0;

  /// Unfitted copy that keeps hyperparameters learned by this instance
  /// (e.g. a data-driven bandwidth) frozen for null-replicate refits.
  virtual std::unique_ptr<Regressor> replicate_template() const = 0;
};

/// Nadaraya-Watson estimator with the Epanechnikov kernel
/// K(u) = 0.75*(1-u^2) on |u| <= 1. Queries with no kernel mass return the
/// fallback value (the training-label mean).
class NadarayaWatson final : public Regressor {
public:
  NadarayaWatson() = default;
  explicit NadarayaWatson(double bandwidth);

  void fit(std::span<const double> s, std::span<const double> y) override;
  double predict(double query, bool* used_fallback = nullptr) const override;
  std::optional<double> support_radius() const override { return bandwidth_; }
  std::unique_ptr<Regressor> replicate_template() const override;

  double bandwidth() const { return bandwidth_; }
  double fallback() const { return fallback_; }
  std::size_t train_size() const { return xs_.size(); }

private:
  std::optional<double> fixed_bandwidth_;
  double bandwidth_ = 0.0;
  double fallback_ = 0.0;
  std::vector<double> xs_;  // sorted
  std::vector<double> ys_;  // aligned with xs_
};

/// Convenience wrapper matching the scalar workflow: fit with optional
/// bandwidth (rule of thumb when absent), fallback = label mean.
NadarayaWatson fit_nw(std::span<const double> s, std::span<const double> y,
                      std::optional<double> bandwidth = std::nullopt);

}  // namespace seqtest

#endif
