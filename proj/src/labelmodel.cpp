#include "seqtest/labelmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace seqtest {

namespace {
constexpr unsigned kMaxOrder = 20;

void check_binary(int y) {
  if (y != 0 && y != 1)
    throw std::invalid_argument("MarkovLabelModel: labels must be 0 or 1");
}
}  // namespace

MarkovLabelModel MarkovLabelModel::fit(const std::vector<std::vector<int>>& runs, unsigned order,
                                       double alpha) {
  if (order > kMaxOrder)
    throw std::invalid_argument("MarkovLabelModel: order too large (max " +
                                std::to_string(kMaxOrder) + ")");
  if (alpha < 0.0) throw std::invalid_argument("MarkovLabelModel: alpha must be >= 0");
  std::size_t total = 0;
  for (const auto& run : runs) total += run.size();
  if (total <= order)
    throw std::invalid_argument("MarkovLabelModel: need more labels than the chain order");

  MarkovLabelModel model;
  model.order_ = order;
  model.alpha_ = alpha;
  const std::size_t states = std::size_t{1} << order;
  const std::uint32_t mask = static_cast<std::uint32_t>(states - 1);
  std::vector<std::uint64_t> count(states, 0), ones(states, 0);

  for (const auto& run : runs) {
    std::uint32_t h = 0;
    for (std::size_t t = 0; t < run.size(); ++t) {
      check_binary(run[t]);
      if (t >= order) {
        ++count[h];
        ones[h] += static_cast<std::uint64_t>(run[t]);
      }
      h = ((h << 1) | static_cast<std::uint32_t>(run[t])) & mask;
      if (order > 0 && t + 1 >= order) model.kgrams_.push_back(h);
    }
  }
  if (order == 0) model.kgrams_.push_back(0);

  model.probs_.resize(states);
  for (std::size_t h = 0; h < states; ++h) {
    const double denom = static_cast<double>(count[h]) + 2.0 * alpha;
    // Unsmoothed and unobserved: take the alpha -> 0+ limit, 1/2.
    model.probs_[h] =
        denom > 0.0 ? (static_cast<double>(ones[h]) + alpha) / denom : 0.5;
  }
  return model;
}

MarkovLabelModel MarkovLabelModel::fit(std::span<const int> labels, unsigned order, double alpha) {
  return fit(std::vector<std::vector<int>>{{labels.begin(), labels.end()}}, order, alpha);
}

std::vector<double> MarkovLabelModel::stationary() const {
  const std::size_t states = probs_.size();
  const std::uint32_t mask = static_cast<std::uint32_t>(states - 1);
  std::vector<double> dist(states, 1.0 / static_cast<double>(states)), next(states);
  for (int iter = 0; iter < 100000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t h = 0; h < states; ++h) {
      const double p1 = probs_[h];
      next[((h << 1) | 1u) & mask] += dist[h] * p1;
      next[(h << 1) & mask] += dist[h] * (1.0 - p1);
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < states; ++i) diff = std::max(diff, std::abs(next[i] - dist[i]));
    dist.swap(next);
    if (diff < 1e-14) break;
  }
  return dist;
}

double MarkovLabelModel::stationary_prob_one() const {
  const auto dist = stationary();
  double p = 0.0;
  for (std::uint32_t h = 0; h < dist.size(); ++h) p += dist[h] * probs_[h];
  return p;
}

std::vector<int> MarkovLabelModel::sample(std::size_t n, Rng& rng, ChainInit init) const {
  if (probs_.empty()) throw std::logic_error("MarkovLabelModel: not fitted");
  const std::uint32_t mask =
      order_ == 0 ? 0u : static_cast<std::uint32_t>((std::size_t{1} << order_) - 1);

  std::uint32_t h = 0;
  if (order_ > 0) {
    if (init == ChainInit::empirical_kgram) {
      if (kgrams_.empty())
        throw std::logic_error(
            "MarkovLabelModel: no observed k-grams (loaded model?); use ChainInit::stationary");
      h = kgrams_[rng.below(kgrams_.size())];
    } else {
      const auto dist = stationary();
      const double u = rng.uniform01();
      double acc = 0.0;
      h = static_cast<std::uint32_t>(dist.size() - 1);
      for (std::uint32_t i = 0; i < dist.size(); ++i) {
        acc += dist[i];
        if (u < acc) {
          h = i;
          break;
        }
      }
    }
  }

  const std::size_t burnin = 100 * static_cast<std::size_t>(order_);
  for (std::size_t t = 0; t < burnin; ++t) {
    const std::uint32_t y = rng.bernoulli(probs_[h]) ? 1u : 0u;
    h = ((h << 1) | y) & mask;
  }
  std::vector<int> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint32_t y = rng.bernoulli(probs_[h]) ? 1u : 0u;
    h = ((h << 1) | y) & mask;
    out[t] = static_cast<int>(y);
  }
  return out;
}

std::uint32_t MarkovLabelModel::encode(std::span<const int> window) {
  std::uint32_t h = 0;
  for (int y : window) {
    check_binary(y);
    h = (h << 1) | static_cast<std::uint32_t>(y);
  }
  return h;
}

void MarkovLabelModel::save_csv(std::ostream& out) const {
  out << "history_bits,prob_one\n";
  out.precision(17);
  for (std::size_t h = 0; h < probs_.size(); ++h) {
    std::string bits;
    for (unsigned b = order_; b > 0; --b) bits += ((h >> (b - 1)) & 1u) ? '1' : '0';
    out << bits << ',' << probs_[h] << '\n';
  }
}

void MarkovLabelModel::save_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_csv(out);
}

MarkovLabelModel MarkovLabelModel::load_csv(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(name + ": empty input");
  ++lineno;
  if (line == "history_bits,prob_one\r") line.pop_back();
  if (line != "history_bits,prob_one")
    throw std::runtime_error(name + ":1: expected header 'history_bits,prob_one'");

  MarkovLabelModel model;
  std::vector<std::pair<std::uint32_t, double>> rows;
  unsigned order = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(name + ":" + std::to_string(lineno) + ": expected 2 fields");
    const std::string bits = line.substr(0, comma);
    if (first) {
      order = static_cast<unsigned>(bits.size());
      if (order > kMaxOrder)
        throw std::runtime_error(name + ":" + std::to_string(lineno) + ": order too large");
      first = false;
    } else if (bits.size() != order) {
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": inconsistent history length");
    }
    std::uint32_t h = 0;
    for (char c : bits) {
      if (c != '0' && c != '1')
        throw std::runtime_error(name + ":" + std::to_string(lineno) + ": bad history bits");
      h = (h << 1) | static_cast<std::uint32_t>(c == '1');
    }
    double p = 0.0;
    try {
      std::size_t pos = 0;
      p = std::stod(line.substr(comma + 1), &pos);
      if (pos != line.size() - comma - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error(name + ":" + std::to_string(lineno) + ": bad probability");
    }
    if (p < 0.0 || p > 1.0)
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": probability outside [0,1]");
    rows.emplace_back(h, p);
  }
  const std::size_t states = std::size_t{1} << order;
  if (rows.size() != states)
    throw std::runtime_error(name + ": expected " + std::to_string(states) + " rows, got " +
                             std::to_string(rows.size()));
  model.order_ = order;
  model.probs_.assign(states, -1.0);
  for (const auto& [h, p] : rows) {
    if (model.probs_[h] >= 0.0)
      throw std::runtime_error(name + ": duplicate history row");
    model.probs_[h] = p;
  }
  return model;
}

MarkovLabelModel MarkovLabelModel::load_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load_csv(in, path);
}

}  // namespace seqtest
