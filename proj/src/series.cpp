#include "seqtest/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace seqtest {

void LabeledSeries::validate() const {
  if (covariates.size() != times.size() || labels.size() != times.size())
    throw std::invalid_argument("LabeledSeries: times, covariates and labels must have equal length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("LabeledSeries: times must be strictly increasing");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 0 && labels[i] != 1)
      throw std::invalid_argument("LabeledSeries: label at position " + std::to_string(i) +
                                  " is " + std::to_string(labels[i]) + ", expected 0 or 1");
  for (std::size_t i = 0; i < covariates.size(); ++i)
    if (!std::isfinite(covariates[i]))
      throw std::invalid_argument("LabeledSeries: covariate at position " + std::to_string(i) +
                                  " is not finite");
}

void SplitSpec::validate(std::size_t n) const {
  std::unordered_set<std::size_t> seen;
  for (const auto* set : {&t1, &t2, &v}) {
    for (std::size_t idx : *set) {
      if (idx >= n)
        throw std::invalid_argument("SplitSpec: index " + std::to_string(idx) +
                                    " out of range for series of length " + std::to_string(n));
      if (!seen.insert(idx).second)
        throw std::invalid_argument("SplitSpec: index " + std::to_string(idx) +
                                    " appears in more than one set");
    }
  }
}

SplitSpec split_series(const LabeledSeries& series,
                       const std::array<double, 3>& fractions, Rng& rng,
                       SplitMode mode) {
  const std::size_t n = series.size();
  double total = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw std::invalid_argument("split_series: fractions must be nonnegative");
    total += f;
  }
  if (total > 1.0 + 1e-12)
    throw std::invalid_argument("split_series: fractions must sum to at most 1");
  if (n < 3) throw std::invalid_argument("split_series: series too short to split");

  std::array<std::size_t, 3> sizes{};
  for (int i = 0; i < 3; ++i) {
    sizes[i] = static_cast<std::size_t>(std::floor(fractions[i] * static_cast<double>(n)));
    if (sizes[i] == 0)
      throw std::invalid_argument("split_series: series too short to produce three nonempty sets");
  }

  SplitSpec out;
  if (mode == SplitMode::contiguous_blocks) {
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      auto& set = (i == 0) ? out.t1 : (i == 1) ? out.t2 : out.v;
      set.resize(sizes[i]);
      std::iota(set.begin(), set.end(), start);
      start += sizes[i];
    }
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    out.t1.assign(order.begin(), order.begin() + sizes[0]);
    out.t2.assign(order.begin() + sizes[0], order.begin() + sizes[0] + sizes[1]);
    out.v.assign(order.begin() + sizes[0] + sizes[1],
                 order.begin() + sizes[0] + sizes[1] + sizes[2]);
    std::sort(out.t1.begin(), out.t1.end());
    std::sort(out.t2.begin(), out.t2.end());
    std::sort(out.v.begin(), out.v.end());
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(
    const std::vector<std::size_t>& indices) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i + 1;
    while (j < indices.size() && indices[j] == indices[j - 1] + 1) ++j;
    runs.emplace_back(indices[i], j - i);
    i = j;
  }
  return runs;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void csv_error(const std::string& name, std::size_t lineno, const std::string& what) {
  throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + what);
}

double parse_double(const std::string& s, const std::string& name, std::size_t lineno,
                    const char* field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    csv_error(name, lineno, std::string("cannot parse ") + field + " value '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, const std::string& name, std::size_t lineno,
                       const char* field) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    csv_error(name, lineno, std::string("cannot parse ") + field + " value '" + s + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

LabeledSeries read_series_csv(std::istream& in, const std::string& name) {
  LabeledSeries series;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(name + ": empty input");
  ++lineno;
  if (split_fields(line) != std::vector<std::string>{"t", "s", "y"})
    csv_error(name, lineno, "expected header 't,s,y'");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) csv_error(name, lineno, "expected 3 fields");
    series.times.push_back(parse_int(fields[0], name, lineno, "t"));
    series.covariates.push_back(parse_double(fields[1], name, lineno, "s"));
    const std::int64_t y = parse_int(fields[2], name, lineno, "y");
    if (y != 0 && y != 1)
      csv_error(name, lineno, "label value " + fields[2] + " is not 0 or 1");
    series.labels.push_back(static_cast<int>(y));
  }
  series.validate();
  return series;
}

LabeledSeries read_series_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_series_csv(in, path);
}

void write_series_csv(std::ostream& out, const LabeledSeries& series) {
  out << "t,s,y\n";
  out.precision(17);
  for (std::size_t i = 0; i < series.size(); ++i)
    out << series.times[i] << ',' << series.covariates[i] << ',' << series.labels[i] << '\n';
}

void write_series_csv_file(const std::string& path, const LabeledSeries& series) {
  auto out = open_output(path);
  write_series_csv(out, series);
}

SplitSpec read_splits_csv(std::istream& in, std::size_t series_length, const std::string& name) {
  SplitSpec splits;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(name + ": empty input");
  ++lineno;
  if (split_fields(line) != std::vector<std::string>{"index", "set"})
    csv_error(name, lineno, "expected header 'index,set'");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) csv_error(name, lineno, "expected 2 fields");
    const std::int64_t idx = parse_int(fields[0], name, lineno, "index");
    if (idx < 0) csv_error(name, lineno, "negative index");
    if (fields[1] == "t1")
      splits.t1.push_back(static_cast<std::size_t>(idx));
    else if (fields[1] == "t2")
      splits.t2.push_back(static_cast<std::size_t>(idx));
    else if (fields[1] == "v")
      splits.v.push_back(static_cast<std::size_t>(idx));
    else
      csv_error(name, lineno, "set value '" + fields[1] + "' is not one of t1,t2,v");
  }
  for (auto* set : {&splits.t1, &splits.t2, &splits.v}) std::sort(set->begin(), set->end());
  splits.validate(series_length);
  return splits;
}

SplitSpec read_splits_csv_file(const std::string& path, std::size_t series_length) {
  auto in = open_input(path);
  return read_splits_csv(in, series_length, path);
}

void write_splits_csv(std::ostream& out, const SplitSpec& splits) {
  out << "index,set\n";
  for (std::size_t i : splits.t1) out << i << ",t1\n";
  for (std::size_t i : splits.t2) out << i << ",t2\n";
  for (std::size_t i : splits.v) out << i << ",v\n";
}

void write_splits_csv_file(const std::string& path, const SplitSpec& splits) {
  auto out = open_output(path);
  write_splits_csv(out, splits);
}

}  // namespace seqtest
