#ifndef SEQTEST_SYNTHETIC_HPP
#define SEQTEST_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "seqtest/rng.hpp"
#include "seqtest/series.hpp"

namespace seqtest {

/// Parameters of the logistic generative model
///   Y_t | S_t ~ Bernoulli(logistic(gamma * H_delta(S_t) + U_t)),
/// where S_t and U_t are independent unit-variance AR(1) processes with
/// lag-1 autocorrelations phi_prime and phi.
struct SyntheticConfig {
  std::size_t n = 0;
  double gamma = 0.0;       // signal strength, >= 0
  double delta = 0.25;      // hard-threshold radius, >= 0
  double phi = 0.0;         // label-noise autocorrelation, in [0,1]
  double phi_prime = 0.0;   // covariate autocorrelation, in [0,1]
  std::uint64_t seed = 0;

  void validate() const;
};

/// Stationary AR(1): U_0 ~ N(0,1), U_t = phi*U_{t-1} + sqrt(1-phi^2)*eps_t.
/// Every draw has marginal variance 1.
std::vector<double> simulate_ar1(std::size_t n, double phi, Rng& rng);

/// H_delta(s): 0 when |s| < delta, s otherwise.
double hard_threshold(double s, double delta);

double logistic(double x);

/// Draw a labeled series from the generative model. Deterministic in
/// config.seed (covariates, noise and labels use separate substreams).
LabeledSeries generate(const SyntheticConfig& config);

}  // namespace seqtest

#endif
