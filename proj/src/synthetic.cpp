#include "seqtest/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seqtest {

void SyntheticConfig::validate() const {
  if (n < 1) throw std::invalid_argument("SyntheticConfig: n must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("SyntheticConfig: gamma must be >= 0");
  if (delta < 0.0) throw std::invalid_argument("SyntheticConfig: delta must be >= 0");
  if (phi < 0.0 || phi > 1.0)
    throw std::invalid_argument("SyntheticConfig: phi must be in [0,1]");
  if (phi_prime < 0.0 || phi_prime > 1.0)
    throw std::invalid_argument("SyntheticConfig: phi_prime must be in [0,1]");
}

std::vector<double> simulate_ar1(std::size_t n, double phi, Rng& rng) {
  if (n < 1) throw std::invalid_argument("simulate_ar1: n must be >= 1");
  if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("simulate_ar1: phi must be in [0,1]");
  std::vector<double> u(n);
  u[0] = rng.normal();  // stationary initialization, no burn-in needed
  const double innov = std::sqrt(1.0 - phi * phi);
  for (std::size_t t = 1; t < n; ++t) u[t] = phi * u[t - 1] + innov * rng.normal();
  return u;
}

double hard_threshold(double s, double delta) {
  return std::abs(s) < delta ? 0.0 : s;
}

double logistic(double x) {
  return 1.0 / (1.0 + std::exp(-x));
}

LabeledSeries generate(const SyntheticConfig& config) {
  config.validate();
  // Fixed substreams keep the three draw sequences independent of each other
  // and of call order.
  Rng rng_s(config.seed, 0);
  Rng rng_u(config.seed, 1);
  Rng rng_y(config.seed, 2);

  LabeledSeries series;
  series.covariates = simulate_ar1(config.n, config.phi_prime, rng_s);
  const std::vector<double> noise = simulate_ar1(config.n, config.phi, rng_u);

  series.times.resize(config.n);
  std::iota(series.times.begin(), series.times.end(), std::int64_t{0});
  series.labels.resize(config.n);
  for (std::size_t t = 0; t < config.n; ++t) {
    const double p =
        logistic(config.gamma * hard_threshold(series.covariates[t], config.delta) + noise[t]);
    series.labels[t] = rng_y.bernoulli(p) ? 1 : 0;
  }
  return series;
}

}  // namespace seqtest
