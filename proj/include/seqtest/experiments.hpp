#ifndef SEQTEST_EXPERIMENTS_HPP
#define SEQTEST_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqtest/dtest.hpp"
#include "seqtest/rng.hpp"
#include "seqtest/synthetic.hpp"

namespace seqtest {

/// Dependence settings of the synthetic studies.
///   A: phi = phi' = 0 (IID pairs)
///   B: phi = 0, phi' = 0.8 (autocorrelated covariates only)
///   C: phi = phi' = 0.8 (autocorrelation in covariates and labels)
enum class Setting { A, B, C };

struct ExperimentSweep {
  Setting setting = Setting::C;
  NullModel null_model = NullModel::mc_bootstrap;
  double gamma = 0.0;
  double delta = 0.25;
  std::optional<double> phi;        // overrides the setting's default
  std::optional<double> phi_prime;  // overrides the setting's default
  std::size_t t1 = 250, t2 = 250, v = 250;
  std::size_t trials = 500;
  std::size_t replicates = 200;  // B
  unsigned markov_order = 4;     // k
  double smoothing = 0.5;
  double alpha_level = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  double resolved_phi() const;
  double resolved_phi_prime() const;
  TestConfig test_config(std::uint64_t test_seed) const;
};

/// Sorted-sample deviations from uniformity: deviation[i] = p(i) - i/(n+1).
struct QqTable {
  std::vector<double> theoretical;
  std::vector<double> empirical;
  std::vector<double> deviation;
};
QqTable qq_deviations(std::vector<double> pvalues);

/// Pointwise central envelope of QQ deviations of `trials` uniform
/// deviates, estimated from `sims` Monte Carlo draws. When lattice_points
/// is nonzero the deviates are rounded up to the grid {1/m, ..., m/m},
/// matching the granularity of a Monte Carlo p-value with m = B+1.
struct ConfidenceBand {
  std::vector<double> lo;
  std::vector<double> hi;
};
ConfidenceBand mc_confidence_band(std::size_t trials, std::size_t sims, double level, Rng& rng,
                                  unsigned threads = 0, std::size_t lattice_points = 0);

struct ValidityResult {
  std::vector<double> pvalues;  // in trial order
  QqTable qq;                   // from the sorted p-values
  ConfidenceBand band;          // Monte Carlo envelope, same length
  double rejection_rate = 0.0;  // fraction with p <= alpha_level
};
/// Null-hypothesis calibration study; requires sweep.gamma == 0.
ValidityResult run_validity(const ExperimentSweep& sweep, std::size_t band_sims = 10000);

enum class PowerParam { gamma, phi, phi_prime, train_size };

struct PowerCell {
  double param = 0.0;
  std::size_t trials = 0;
  std::size_t rejections = 0;
  double power = 0.0;
  double ci_lo = 0.0;  // Wilson 95% interval
  double ci_hi = 0.0;
};
std::vector<PowerCell> run_power(const ExperimentSweep& sweep, PowerParam param,
                                 std::span<const double> grid);

struct LpdCurves {
  std::vector<double> grid;             // evaluation points s
  std::vector<double> true_lpd;         // by numerical integration
  std::vector<std::size_t> train_sizes;
  std::vector<std::vector<double>> mean;  // [size][grid]
  std::vector<std::vector<double>> sd;    // [size][grid]
};
/// Estimated-LPD sampling study over a fixed s grid; requires gamma > 0
/// and delta > 0.
LpdCurves run_lpd_recovery(const ExperimentSweep& sweep, std::span<const std::size_t> train_sizes,
                           std::span<const double> grid);

/// Exact posterior difference for a discrete covariate, computed two ways:
/// by Bayes' rule, and as the scaled density difference
/// (p1 - p0) / (p1/(1-pi) + p0/pi). The two agree to machine precision.
struct OracleDifference {
  double bayes = 0.0;
  double scaled_density = 0.0;
};
OracleDifference oracle_posterior_difference(std::span<const double> p_given_1,
                                             std::span<const double> p_given_0, double pi,
                                             std::size_t index);

/// P(Y=1 | S=s) of the generative model, marginalized over the noise by
/// 64-node Gauss-Hermite quadrature.
double true_posterior(double s, double gamma, double delta);
/// P(Y=1) by a second quadrature over s (equals 1/2 by symmetry).
double true_prior(double gamma, double delta);
double true_lpd(double s, double gamma, double delta);

/// One-sample Kolmogorov-Smirnov statistic against Uniform(0,1).
double ks_statistic_uniform(std::vector<double> values);
/// Asymptotic 5%-level critical value, 1.358/sqrt(n).
double ks_critical_95(std::size_t n);

double rejection_rate(std::span<const double> pvalues, double alpha);

}  // namespace seqtest

#endif
