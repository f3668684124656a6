#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seqtest/dtest.hpp"
#include "seqtest/eventlabel.hpp"
#include "seqtest/experiments.hpp"
#include "seqtest/svg.hpp"
#include "seqtest/synthetic.hpp"

namespace {

using namespace seqtest;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// ---------------------------------------------------------------------------
// experiment config files: plain "key = value" lines, '#' comments
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    if (!kv.emplace(key, value).second)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                               "'");
  }
  return kv;
}

class ConfigReader {
public:
  ConfigReader(std::map<std::string, std::string> kv, std::string path)
      : kv_(std::move(kv)), path_(std::move(path)) {}

  std::optional<std::string> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    const auto v = take(key);
    if (!v) return;
    std::istringstream is(*v);
    T parsed{};
    if (!(is >> parsed) || !is.eof())
      throw std::runtime_error(path_ + ": cannot parse value for '" + key + "'");
    out = parsed;
  }

  void get(const std::string& key, std::optional<double>& out) {
    double v = 0;
    bool seen = false;
    if (const auto raw = take(key)) {
      std::istringstream is(*raw);
      if (!(is >> v) || !is.eof())
        throw std::runtime_error(path_ + ": cannot parse value for '" + key + "'");
      seen = true;
    }
    if (seen) out = v;
  }

  std::vector<double> take_list(const std::string& key, std::vector<double> fallback) {
    const auto raw = take(key);
    if (!raw) return fallback;
    std::vector<double> out;
    std::stringstream ss(*raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      std::istringstream is(item);
      double v = 0;
      if (!(is >> v) || !is.eof())
        throw std::runtime_error(path_ + ": cannot parse list value for '" + key + "'");
      out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error(path_ + ": empty list for '" + key + "'");
    return out;
  }

  void finish() const {
    if (!kv_.empty())
      throw std::runtime_error(path_ + ": unknown key '" + kv_.begin()->first + "'");
  }

  const std::string& path() const { return path_; }

private:
  std::map<std::string, std::string> kv_;
  std::string path_;
};

Setting parse_setting(const std::string& s) {
  if (s == "A" || s == "a") return Setting::A;
  if (s == "B" || s == "b") return Setting::B;
  if (s == "C" || s == "c") return Setting::C;
  throw std::runtime_error("unknown setting '" + s + "' (expected A, B or C)");
}

NullModel parse_null_model(const std::string& s) {
  if (s == "bootstrap") return NullModel::mc_bootstrap;
  if (s == "permutation") return NullModel::permutation;
  throw std::runtime_error("unknown null model '" + s + "' (expected bootstrap or permutation)");
}

ExperimentSweep read_sweep(ConfigReader& cfg, std::size_t default_trials) {
  ExperimentSweep sweep;
  sweep.trials = default_trials;
  if (const auto s = cfg.take("setting")) sweep.setting = parse_setting(*s);
  if (const auto s = cfg.take("null")) sweep.null_model = parse_null_model(*s);
  cfg.get("gamma", sweep.gamma);
  cfg.get("delta", sweep.delta);
  cfg.get("phi", sweep.phi);
  cfg.get("phi_prime", sweep.phi_prime);
  cfg.get("t1", sweep.t1);
  cfg.get("t2", sweep.t2);
  cfg.get("v", sweep.v);
  cfg.get("trials", sweep.trials);
  cfg.get("B", sweep.replicates);
  cfg.get("k", sweep.markov_order);
  cfg.get("alpha", sweep.smoothing);
  cfg.get("alpha_level", sweep.alpha_level);
  cfg.get("seed", sweep.seed);
  cfg.get("threads", sweep.threads);
  return sweep;
}

struct SweepOverrides {
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  void apply(ExperimentSweep& sweep) const {
    if (trials) sweep.trials = *trials;
    if (seed) sweep.seed = *seed;
    if (threads) sweep.threads = *threads;
  }
};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.precision(17);
  return out;
}

// ---------------------------------------------------------------------------
// experiment drivers
// ---------------------------------------------------------------------------

void run_validity_cmd(ConfigReader& cfg, const std::filesystem::path& dir, bool svg,
                      const SweepOverrides& overrides) {
  ExperimentSweep sweep = read_sweep(cfg, 500);
  overrides.apply(sweep);
  std::size_t band_sims = 10000;
  cfg.get("band_sims", band_sims);
  cfg.finish();

  const ValidityResult result = run_validity(sweep, band_sims);

  auto pv = open_out(dir / "pvalues.csv");
  pv << "trial,p_value\n";
  for (std::size_t t = 0; t < result.pvalues.size(); ++t)
    pv << t << ',' << result.pvalues[t] << '\n';

  auto qq = open_out(dir / "qq.csv");
  qq << "i,theoretical,empirical,deviation,band_lo,band_hi\n";
  std::size_t outside = 0;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < result.qq.deviation.size(); ++i) {
    qq << i + 1 << ',' << result.qq.theoretical[i] << ',' << result.qq.empirical[i] << ','
       << result.qq.deviation[i] << ',' << result.band.lo[i] << ',' << result.band.hi[i] << '\n';
    max_dev = std::max(max_dev, std::abs(result.qq.deviation[i]));
    if (result.qq.deviation[i] < result.band.lo[i] || result.qq.deviation[i] > result.band.hi[i])
      ++outside;
  }

  auto summary = open_out(dir / "summary.csv");
  summary << "trials,alpha_level,rejection_rate,max_abs_deviation,points_outside_band\n"
          << result.pvalues.size() << ',' << sweep.alpha_level << ',' << result.rejection_rate
          << ',' << max_dev << ',' << outside << '\n';

  if (svg) {
    SvgPlot plot("p-value QQ deviations", "theoretical quantile", "empirical - theoretical");
    plot.add_band(result.qq.theoretical, result.band.lo, result.band.hi, "#bbbbbb");
    plot.add_line(result.qq.theoretical, result.qq.deviation, "#1f77b4", "observed");
    plot.add_line({result.qq.theoretical.front(), result.qq.theoretical.back()}, {0.0, 0.0},
                  "#000000", "zero");
    plot.save((dir / "validity.svg").string());
  }
  std::cerr << "validity: " << result.pvalues.size() << " trials, rejection rate "
            << result.rejection_rate << ", " << outside << " QQ points outside the band\n";
}

void run_power_cmd(ConfigReader& cfg, const std::filesystem::path& dir, bool svg,
                   const SweepOverrides& overrides) {
  ExperimentSweep sweep = read_sweep(cfg, 1000);
  overrides.apply(sweep);
  std::string sweep_name = "gamma";
  if (const auto s = cfg.take("sweep")) sweep_name = *s;
  PowerParam param;
  std::vector<double> default_grid;
  if (sweep_name == "gamma") {
    param = PowerParam::gamma;
    default_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  } else if (sweep_name == "phi") {
    param = PowerParam::phi;
    default_grid = {0.0, 0.4, 0.8};
  } else if (sweep_name == "phi_prime") {
    param = PowerParam::phi_prime;
    default_grid = {0.0, 0.4, 0.8};
  } else if (sweep_name == "t1") {
    param = PowerParam::train_size;
    default_grid = {250, 500, 1000, 2000};
  } else {
    throw std::runtime_error("unknown sweep '" + sweep_name +
                             "' (expected gamma, phi, phi_prime or t1)");
  }
  const std::vector<double> grid = cfg.take_list("grid", default_grid);
  cfg.finish();

  const std::vector<PowerCell> cells = run_power(sweep, param, grid);

  auto out = open_out(dir / "power.csv");
  out << "sweep,param,trials,rejections,power,ci_lo,ci_hi\n";
  for (const auto& cell : cells)
    out << sweep_name << ',' << cell.param << ',' << cell.trials << ',' << cell.rejections << ','
        << cell.power << ',' << cell.ci_lo << ',' << cell.ci_hi << '\n';

  if (svg) {
    std::vector<double> xs, ys, lo, hi;
    for (const auto& cell : cells) {
      xs.push_back(cell.param);
      ys.push_back(cell.power);
      lo.push_back(cell.ci_lo);
      hi.push_back(cell.ci_hi);
    }
    SvgPlot plot("rejection rate at alpha level", sweep_name, "power");
    plot.add_error_bars(xs, lo, hi, "#1f77b4");
    plot.add_line(xs, ys, "#1f77b4", "power");
    plot.add_points(xs, ys, "#1f77b4");
    plot.save((dir / "power.svg").string());
  }
  std::cerr << "power: " << cells.size() << " cells x " << sweep.trials << " trials\n";
}

void run_lpd_cmd(ConfigReader& cfg, const std::filesystem::path& dir, bool svg,
                 const SweepOverrides& overrides) {
  ExperimentSweep sweep = read_sweep(cfg, 200);
  overrides.apply(sweep);
  if (sweep.gamma == 0.0) sweep.gamma = 0.5;
  double grid_min = -2.0, grid_max = 2.0, grid_step = 0.05;
  cfg.get("grid_min", grid_min);
  cfg.get("grid_max", grid_max);
  cfg.get("grid_step", grid_step);
  const std::vector<double> sizes_raw = cfg.take_list("t1_sizes", {250, 4000});
  cfg.finish();
  if (grid_step <= 0.0 || grid_max < grid_min)
    throw std::runtime_error(cfg.path() + ": bad LPD grid");

  std::vector<std::size_t> sizes;
  for (double v : sizes_raw) {
    if (v < 2) throw std::runtime_error(cfg.path() + ": t1_sizes entries must be >= 2");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  std::vector<double> grid;
  for (double s = grid_min; s <= grid_max + 1e-12; s += grid_step) grid.push_back(s);

  const LpdCurves curves = run_lpd_recovery(sweep, sizes, grid);

  auto out = open_out(dir / "lpd.csv");
  out << "s,true_lpd";
  for (std::size_t n : curves.train_sizes) out << ",mean_" << n << ",sd_" << n;
  out << '\n';
  for (std::size_t g = 0; g < curves.grid.size(); ++g) {
    out << curves.grid[g] << ',' << curves.true_lpd[g];
    for (std::size_t si = 0; si < curves.train_sizes.size(); ++si)
      out << ',' << curves.mean[si][g] << ',' << curves.sd[si][g];
    out << '\n';
  }

  if (svg) {
    SvgPlot plot("local posterior difference", "s", "lpd");
    const std::array<const char*, 4> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t si = 0; si < curves.train_sizes.size(); ++si) {
      std::vector<double> lo(curves.grid.size()), hi(curves.grid.size());
      for (std::size_t g = 0; g < curves.grid.size(); ++g) {
        lo[g] = curves.mean[si][g] - curves.sd[si][g];
        hi[g] = curves.mean[si][g] + curves.sd[si][g];
      }
      const std::string color = colors[si % colors.size()];
      plot.add_band(curves.grid, lo, hi, color);
      plot.add_line(curves.grid, curves.mean[si], color,
                    "train size " + std::to_string(curves.train_sizes[si]));
    }
    plot.add_line(curves.grid, curves.true_lpd, "#000000", "true");
    plot.save((dir / "lpd.svg").string());
  }
  std::cerr << "lpd: " << curves.train_sizes.size() << " train sizes x " << sweep.trials
            << " trials\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap regression two-sample test for labeled sequence data"};
  app.set_version_flag("--version", std::string("seqtest ") + SEQTEST_VERSION);
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "Draw a labeled series from the generative model");
  SyntheticConfig sim_config;
  std::string sim_out;
  sim->add_option("--n", sim_config.n, "series length")->required();
  sim->add_option("--gamma", sim_config.gamma, "signal strength (>= 0)");
  sim->add_option("--delta", sim_config.delta, "hard-threshold radius")->capture_default_str();
  sim->add_option("--phi", sim_config.phi, "label-noise autocorrelation in [0,1]");
  sim->add_option("--phi-prime", sim_config.phi_prime, "covariate autocorrelation in [0,1]");
  sim->add_option("--seed", sim_config.seed, "random seed");
  sim->add_option("--out", sim_out, "output CSV (t,s,y), '-' for stdout")->required();

  // --- test ---
  auto* test = app.add_subcommand("test", "Run the distributional-difference test");
  std::string test_in, test_splits, test_report = "-", test_null = "bootstrap";
  std::string test_init = "empirical";
  std::vector<double> test_fractions;
  std::string test_split_mode = "blocks";
  TestConfig test_config;
  double test_bandwidth = 0.0;
  test->add_option("--in", test_in, "input series CSV (t,s,y)")->required();
  test->add_option("--splits", test_splits, "splits CSV (index,set); omit to split by fractions");
  test->add_option("--fractions", test_fractions,
                   "t1,t2,v fractions used when --splits is omitted")
      ->expected(3);
  test->add_option("--split-mode", test_split_mode, "blocks|interleaved")
      ->check(CLI::IsMember({"blocks", "interleaved"}));
  test->add_option("--null", test_null, "null model: bootstrap|permutation")
      ->check(CLI::IsMember({"bootstrap", "permutation"}));
  test->add_option("--B", test_config.replicates, "null replicates")->capture_default_str();
  test->add_option("--k", test_config.markov_order, "Markov order")->capture_default_str();
  test->add_option("--alpha", test_config.smoothing, "Laplace smoothing")->capture_default_str();
  test->add_option("--bandwidth", test_bandwidth, "fixed kernel bandwidth (default: rule of thumb)");
  test->add_option("--init", test_init, "chain initialization: empirical|stationary")
      ->check(CLI::IsMember({"empirical", "stationary"}));
  test->add_option("--seed", test_config.seed, "random seed");
  test->add_option("--threads", test_config.threads, "worker threads (0 = all)");
  test->add_option("--report", test_report, "report CSV, '-' for stdout");

  // --- label-events ---
  auto* label = app.add_subcommand("label-events", "Label rapid intensity change events");
  std::string label_in, label_out, label_direction = "ri";
  double label_threshold = 25.0, label_min_intensity = 35.0;
  std::size_t label_fine_steps = 1;
  bool label_genesis = false;
  label->add_option("--in", label_in, "input intensity CSV (t,w)")->required();
  label->add_option("--threshold", label_threshold, "intensity change per 24 h (knots)")
      ->capture_default_str();
  label->add_option("--direction", label_direction, "ri|rw")
      ->check(CLI::IsMember({"ri", "rw"}));
  label->add_option("--fine-steps", label_fine_steps,
                    "subdivisions per synoptic interval (1 = no interpolation)")
      ->capture_default_str();
  label->add_flag("--genesis-filter", label_genesis,
                  "restrict to the mature phase before labeling");
  label->add_option("--min-intensity", label_min_intensity,
                    "genesis/lysis intensity threshold (knots)")
      ->capture_default_str();
  label->add_option("--out", label_out, "output labels CSV (t,y), '-' for stdout")->required();

  // --- experiment ---
  auto* exp = app.add_subcommand("experiment", "Batch studies: validity | power | lpd");
  std::string exp_kind, exp_config, exp_out;
  bool exp_svg = false;
  std::size_t exp_trials = 0;
  std::uint64_t exp_seed = 0;
  unsigned exp_threads = 0;
  exp->add_option("kind", exp_kind, "validity|power|lpd")
      ->required()
      ->check(CLI::IsMember({"validity", "power", "lpd"}));
  exp->add_option("--config", exp_config, "key=value config file")->required();
  exp->add_option("--out", exp_out, "output directory")->required();
  exp->add_flag("--svg", exp_svg, "also write an SVG rendering");
  exp->add_option("--trials", exp_trials, "override the config's trial count");
  exp->add_option("--seed", exp_seed, "override the config's seed");
  exp->add_option("--threads", exp_threads, "override the config's thread cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(sim)) {
      const LabeledSeries series = generate(sim_config);
      if (sim_out == "-")
        write_series_csv(std::cout, series);
      else
        write_series_csv_file(sim_out, series);
    } else if (app.got_subcommand(test)) {
      const LabeledSeries data = read_series_csv_file(test_in);
      SplitSpec splits;
      if (!test_splits.empty()) {
        splits = read_splits_csv_file(test_splits, data.size());
      } else {
        std::array<double, 3> fractions{1.0 / 3, 1.0 / 3, 1.0 / 3};
        if (!test_fractions.empty())
          fractions = {test_fractions[0], test_fractions[1], test_fractions[2]};
        Rng rng(test_config.seed, 0xF5);
        splits = split_series(data, fractions, rng,
                              test_split_mode == "blocks" ? SplitMode::contiguous_blocks
                                                          : SplitMode::interleaved);
      }
      test_config.null_model = parse_null_model(test_null);
      test_config.chain_init =
          test_init == "empirical" ? ChainInit::empirical_kgram : ChainInit::stationary;
      if (test->count("--bandwidth") > 0) test_config.bandwidth = test_bandwidth;
      const TestReport report = run_test(data, splits, test_config);
      if (test_report == "-")
        write_report_csv(std::cout, report, data, splits);
      else
        write_report_csv_file(test_report, report, data, splits);
      std::cerr << "lambda=" << report.lambda << " p_value=" << report.p_value
                << " fallback_count=" << report.fallback_count << '\n';
    } else if (app.got_subcommand(label)) {
      IntensitySeries series = read_intensity_csv_file(label_in);
      if (label_genesis) {
        series = genesis_lysis_trim(series, label_min_intensity);
        if (series.times.empty())
          throw std::runtime_error("genesis filter removed the whole series");
      }
      const EventDirection direction = label_direction == "ri"
                                           ? EventDirection::rapid_intensification
                                           : EventDirection::rapid_weakening;
      const EventLabels synoptic = label_rapid_events(series, label_threshold, direction);
      const auto write = [&](auto&& labels) {
        if (label_out == "-")
          write_labels_csv(std::cout, labels);
        else
          write_labels_csv_file(label_out, labels);
      };
      if (label_fine_steps > 1)
        write(interpolate_labels(synoptic, label_fine_steps));
      else
        write(synoptic);
    } else if (app.got_subcommand(exp)) {
      const std::filesystem::path dir(exp_out);
      std::filesystem::create_directories(dir);
      ConfigReader cfg(read_config(exp_config), exp_config);
      SweepOverrides overrides;
      if (exp->count("--trials") > 0) overrides.trials = exp_trials;
      if (exp->count("--seed") > 0) overrides.seed = exp_seed;
      if (exp->count("--threads") > 0) overrides.threads = exp_threads;
      if (exp_kind == "validity")
        run_validity_cmd(cfg, dir, exp_svg, overrides);
      else if (exp_kind == "power")
        run_power_cmd(cfg, dir, exp_svg, overrides);
      else
        run_lpd_cmd(cfg, dir, exp_svg, overrides);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
