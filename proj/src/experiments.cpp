#include "seqtest/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "seqtest/parallel.hpp"
#include "seqtest/quadrature.hpp"
#include "seqtest/regressors.hpp"

namespace seqtest {

namespace {

constexpr std::uint64_t kStreamData = 0x64617461;  // trial data generation
constexpr std::uint64_t kStreamTest = 0x74657374;  // per-trial test seed
constexpr std::uint64_t kStreamBand = 0x62616e64;  // confidence-band draws

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

SplitSpec block_split(std::size_t a, std::size_t b, std::size_t c) {
  SplitSpec s;
  s.t1.resize(a);
  s.t2.resize(b);
  s.v.resize(c);
  for (std::size_t i = 0; i < a; ++i) s.t1[i] = i;
  for (std::size_t i = 0; i < b; ++i) s.t2[i] = a + i;
  for (std::size_t i = 0; i < c; ++i) s.v[i] = a + b + i;
  return s;
}

double wilson_lo(std::size_t k, std::size_t n) {
  if (k == 0) return 0.0;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double z2n = z * z / static_cast<double>(n);
  const double center = (p + z2n / 2.0) / (1.0 + z2n);
  const double half =
      z * std::sqrt(p * (1.0 - p) / static_cast<double>(n) + z2n / (4.0 * static_cast<double>(n))) /
      (1.0 + z2n);
  return std::max(0.0, center - half);
}

double wilson_hi(std::size_t k, std::size_t n) {
  return 1.0 - wilson_lo(n - k, n);
}

/// One trial of a calibration/power sweep: generate, block-split, test.
double trial_pvalue(const ExperimentSweep& sweep, std::uint64_t cell, std::size_t trial) {
  SyntheticConfig gen;
  gen.n = sweep.t1 + sweep.t2 + sweep.v;
  gen.gamma = sweep.gamma;
  gen.delta = sweep.delta;
  gen.phi = sweep.resolved_phi();
  gen.phi_prime = sweep.resolved_phi_prime();
  gen.seed = mix_seed(mix_seed(mix_seed(sweep.seed, kStreamData), cell), trial);

  const LabeledSeries data = generate(gen);
  const SplitSpec splits = block_split(sweep.t1, sweep.t2, sweep.v);
  TestConfig config =
      sweep.test_config(mix_seed(mix_seed(mix_seed(sweep.seed, kStreamTest), cell), trial));
  config.threads = 1;  // trials are the parallel unit
  return run_test(data, splits, config).p_value;
}

}  // namespace

double ExperimentSweep::resolved_phi() const {
  if (phi) return *phi;
  return setting == Setting::C ? 0.8 : 0.0;
}

double ExperimentSweep::resolved_phi_prime() const {
  if (phi_prime) return *phi_prime;
  return setting == Setting::A ? 0.0 : 0.8;
}

TestConfig ExperimentSweep::test_config(std::uint64_t test_seed) const {
  TestConfig config;
  config.null_model = null_model;
  config.replicates = replicates;
  config.markov_order = markov_order;
  config.smoothing = smoothing;
  config.seed = test_seed;
  config.threads = threads;
  return config;
}

QqTable qq_deviations(std::vector<double> pvalues) {
  std::sort(pvalues.begin(), pvalues.end());
  const std::size_t n = pvalues.size();
  QqTable table;
  table.theoretical.resize(n);
  table.empirical = std::move(pvalues);
  table.deviation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    table.theoretical[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    table.deviation[i] = table.empirical[i] - table.theoretical[i];
  }
  return table;
}

ConfidenceBand mc_confidence_band(std::size_t trials, std::size_t sims, double level, Rng& rng,
                                  unsigned threads, std::size_t lattice_points) {
  if (trials < 1 || sims < 2) throw std::invalid_argument("mc_confidence_band: degenerate sizes");
  if (level <= 0.0 || level >= 1.0)
    throw std::invalid_argument("mc_confidence_band: level must be in (0,1)");

  const std::uint64_t base = rng.next_u64();
  // deviations[i * sims + s] for quantile i in simulation s
  std::vector<double> deviations(trials * sims);
  parallel_for(sims, threads, [&](std::size_t s) {
    Rng sim_rng(base, s);
    std::vector<double> u(trials);
    for (double& x : u) {
      x = sim_rng.uniform01();
      if (lattice_points > 0) {
        const auto m = static_cast<double>(lattice_points);
        x = std::ceil(x * m) / m;  // grid of achievable Monte Carlo p-values
        if (x <= 0.0) x = 1.0 / m;
      }
    }
    std::sort(u.begin(), u.end());
    for (std::size_t i = 0; i < trials; ++i)
      deviations[i * sims + s] =
          u[i] - static_cast<double>(i + 1) / static_cast<double>(trials + 1);
  });

  const double tail = 0.5 * (1.0 - level);
  const auto rank_lo = static_cast<std::size_t>(std::floor(tail * static_cast<double>(sims - 1)));
  const std::size_t rank_hi = sims - 1 - rank_lo;
  ConfidenceBand band;
  band.lo.resize(trials);
  band.hi.resize(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    auto first = deviations.begin() + static_cast<std::ptrdiff_t>(i * sims);
    auto last = first + static_cast<std::ptrdiff_t>(sims);
    std::nth_element(first, first + static_cast<std::ptrdiff_t>(rank_lo), last);
    band.lo[i] = *(first + static_cast<std::ptrdiff_t>(rank_lo));
    std::nth_element(first, first + static_cast<std::ptrdiff_t>(rank_hi), last);
    band.hi[i] = *(first + static_cast<std::ptrdiff_t>(rank_hi));
  });
  return band;
}

ValidityResult run_validity(const ExperimentSweep& sweep, std::size_t band_sims) {
  if (sweep.gamma != 0.0)
    throw std::invalid_argument("run_validity: calibration study requires gamma = 0");
  if (sweep.trials < 1) throw std::invalid_argument("run_validity: trials must be >= 1");

  ValidityResult result;
  result.pvalues.resize(sweep.trials);
  parallel_for(sweep.trials, sweep.threads,
               [&](std::size_t t) { result.pvalues[t] = trial_pvalue(sweep, 0, t); });
  result.qq = qq_deviations(result.pvalues);
  Rng band_rng(sweep.seed, kStreamBand);
  result.band = mc_confidence_band(sweep.trials, band_sims, 0.95, band_rng, sweep.threads);
  result.rejection_rate = rejection_rate(result.pvalues, sweep.alpha_level);
  return result;
}

std::vector<PowerCell> run_power(const ExperimentSweep& sweep, PowerParam param,
                                 std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("run_power: empty parameter grid");
  if (sweep.trials < 1) throw std::invalid_argument("run_power: trials must be >= 1");

  std::vector<PowerCell> cells(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    ExperimentSweep cell_sweep = sweep;
    switch (param) {
      case PowerParam::gamma: cell_sweep.gamma = grid[c]; break;
      case PowerParam::phi: cell_sweep.phi = grid[c]; break;
      case PowerParam::phi_prime: cell_sweep.phi_prime = grid[c]; break;
      case PowerParam::train_size:
        if (grid[c] < 1.0) throw std::invalid_argument("run_power: train size must be >= 1");
        cell_sweep.t1 = static_cast<std::size_t>(grid[c]);
        break;
    }
    std::vector<double> pvalues(sweep.trials);
    parallel_for(sweep.trials, sweep.threads,
                 [&](std::size_t t) { pvalues[t] = trial_pvalue(cell_sweep, c + 1, t); });
    PowerCell& cell = cells[c];
    cell.param = grid[c];
    cell.trials = sweep.trials;
    for (double p : pvalues)
      if (p <= sweep.alpha_level) ++cell.rejections;
    cell.power = static_cast<double>(cell.rejections) / static_cast<double>(cell.trials);
    cell.ci_lo = wilson_lo(cell.rejections, cell.trials);
    cell.ci_hi = wilson_hi(cell.rejections, cell.trials);
  }
  return cells;
}

LpdCurves run_lpd_recovery(const ExperimentSweep& sweep, std::span<const std::size_t> train_sizes,
                           std::span<const double> grid) {
  if (sweep.gamma <= 0.0 || sweep.delta <= 0.0)
    throw std::invalid_argument("run_lpd_recovery: requires gamma > 0 and delta > 0");
  if (train_sizes.empty() || grid.empty())
    throw std::invalid_argument("run_lpd_recovery: empty sizes or grid");

  LpdCurves curves;
  curves.grid.assign(grid.begin(), grid.end());
  curves.train_sizes.assign(train_sizes.begin(), train_sizes.end());
  curves.true_lpd.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    curves.true_lpd[i] = true_lpd(grid[i], sweep.gamma, sweep.delta);

  for (std::size_t si = 0; si < train_sizes.size(); ++si) {
    const std::size_t n = train_sizes[si];
    // per-trial LPD estimates, reduced in trial order afterwards
    std::vector<double> estimates(sweep.trials * grid.size());
    parallel_for(sweep.trials, sweep.threads, [&](std::size_t t) {
      SyntheticConfig gen;
      gen.n = n;
      gen.gamma = sweep.gamma;
      gen.delta = sweep.delta;
      gen.phi = sweep.resolved_phi();
      gen.phi_prime = sweep.resolved_phi_prime();
      gen.seed = mix_seed(mix_seed(mix_seed(sweep.seed, kStreamData), 1000 + si), t);
      const LabeledSeries data = generate(gen);

      const double prior = estimate_prior(data.labels).value;
      std::vector<double> y(data.labels.begin(), data.labels.end());
      const NadarayaWatson nw = fit_nw(data.covariates, y);
      for (std::size_t g = 0; g < grid.size(); ++g)
        estimates[t * grid.size() + g] = nw.predict(grid[g]) - prior;
    });

    std::vector<double> mean(grid.size(), 0.0), sd(grid.size(), 0.0);
    for (std::size_t t = 0; t < sweep.trials; ++t)
      for (std::size_t g = 0; g < grid.size(); ++g) mean[g] += estimates[t * grid.size() + g];
    for (double& m : mean) m /= static_cast<double>(sweep.trials);
    if (sweep.trials > 1) {
      for (std::size_t t = 0; t < sweep.trials; ++t)
        for (std::size_t g = 0; g < grid.size(); ++g) {
          const double d = estimates[t * grid.size() + g] - mean[g];
          sd[g] += d * d;
        }
      for (double& s : sd) s = std::sqrt(s / static_cast<double>(sweep.trials - 1));
    }
    curves.mean.push_back(std::move(mean));
    curves.sd.push_back(std::move(sd));
  }
  return curves;
}

OracleDifference oracle_posterior_difference(std::span<const double> p_given_1,
                                             std::span<const double> p_given_0, double pi,
                                             std::size_t index) {
  if (p_given_1.size() != p_given_0.size() || p_given_1.empty())
    throw std::invalid_argument("oracle_posterior_difference: mismatched class-conditionals");
  if (pi <= 0.0 || pi >= 1.0)
    throw std::invalid_argument("oracle_posterior_difference: pi must be in (0,1)");
  if (index >= p_given_1.size())
    throw std::invalid_argument("oracle_posterior_difference: index out of range");
  double sum1 = 0.0, sum0 = 0.0;
  for (std::size_t i = 0; i < p_given_1.size(); ++i) {
    if (p_given_1[i] < 0.0 || p_given_0[i] < 0.0)
      throw std::invalid_argument("oracle_posterior_difference: negative density");
    sum1 += p_given_1[i];
    sum0 += p_given_0[i];
  }
  if (std::abs(sum1 - 1.0) > 1e-9 || std::abs(sum0 - 1.0) > 1e-9)
    throw std::invalid_argument("oracle_posterior_difference: densities must be normalized");

  const double p1 = p_given_1[index], p0 = p_given_0[index];
  const double total = pi * p1 + (1.0 - pi) * p0;
  if (total <= 0.0)
    throw std::invalid_argument("oracle_posterior_difference: zero total density at index");

  OracleDifference out;
  out.bayes = pi * p1 / total - pi;
  const double w = p1 / (1.0 - pi) + p0 / pi;
  out.scaled_density = (p1 - p0) / w;
  if (std::abs(out.bayes - out.scaled_density) > 1e-12)
    throw std::logic_error("oracle_posterior_difference: the two routes disagree");
  return out;
}

double true_posterior(double s, double gamma, double delta) {
  const double shift = gamma * hard_threshold(s, delta);
  return gaussian_expectation([shift](double u) { return logistic(shift + u); }, 64);
}

double true_prior(double gamma, double delta) {
  // The posterior is constant on |s| < delta and smooth outside; integrate
  // the pieces separately so the hard threshold costs no accuracy.
  const auto f = [&](double s) { return normal_pdf(s) * true_posterior(s, gamma, delta); };
  const double tail = 14.0;
  double total = 0.0;
  if (delta > 0.0)
    total += (normal_cdf(delta) - normal_cdf(-delta)) * true_posterior(0.0, gamma, delta);
  total += integrate(f, delta, delta + tail, 160);
  total += integrate(f, -delta - tail, -delta, 160);
  return total;
}

double true_lpd(double s, double gamma, double delta) {
  return true_posterior(s, gamma, delta) - true_prior(gamma, delta);
}

double ks_statistic_uniform(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ks_statistic_uniform: empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0 || values[i] > 1.0)
      throw std::invalid_argument("ks_statistic_uniform: values must lie in [0,1]");
    d = std::max(d, static_cast<double>(i + 1) / n - values[i]);
    d = std::max(d, values[i] - static_cast<double>(i) / n);
  }
  return d;
}

double ks_critical_95(std::size_t n) {
  return 1.358 / std::sqrt(static_cast<double>(n));
}

double rejection_rate(std::span<const double> pvalues, double alpha) {
  if (pvalues.empty()) return 0.0;
  std::size_t rejections = 0;
  for (double p : pvalues)
    if (p <= alpha) ++rejections;
  return static_cast<double>(rejections) / static_cast<double>(pvalues.size());
}

}  // namespace seqtest
