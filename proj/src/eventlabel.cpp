#include "seqtest/eventlabel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace seqtest {

void IntensitySeries::validate() const {
  if (intensities.size() != times.size())
    throw std::invalid_argument("IntensitySeries: times and intensities must have equal length");
  if (times.empty()) throw std::invalid_argument("IntensitySeries: empty series");
  if (times.size() >= 2) {
    const std::int64_t step = times[1] - times[0];
    if (step <= 0) throw std::invalid_argument("IntensitySeries: times must be increasing");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] - times[i - 1] != step)
        throw std::invalid_argument("IntensitySeries: irregular time spacing at position " +
                                    std::to_string(i));
  }
  for (double w : intensities)
    if (!std::isfinite(w))
      throw std::invalid_argument("IntensitySeries: intensities must be finite");
}

namespace {

// Core of the labeling: 24-hour windows are [t, t+4]; a 6-hour step t is
// "intensifying" when W[t+1] > W[t]. A flagged window keeps the maximal
// sub-interval whose first and last steps are intensifying.
std::vector<int> label_forward(const std::vector<double>& w, double threshold) {
  const std::size_t n = w.size();
  std::vector<int> labels(n, 0);
  if (n < 5) return labels;

  std::vector<char> rising(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) rising[t] = w[t + 1] > w[t];

  for (std::size_t t = 0; t + 4 < n; ++t) {
    const double peak = *std::max_element(w.begin() + static_cast<std::ptrdiff_t>(t),
                                          w.begin() + static_cast<std::ptrdiff_t>(t + 5));
    if (peak - w[t] < threshold) continue;
    std::size_t lo = t, hi = t + 4;
    while (hi > lo && !rising[hi - 1]) --hi;  // trim non-intensification from the end
    while (lo < hi && !rising[lo]) ++lo;      // trim non-intensification from the start
    for (std::size_t j = lo; j <= hi; ++j) labels[j] = 1;
  }
  return labels;
}

}  // namespace

EventLabels label_rapid_events(const IntensitySeries& series, double threshold,
                               EventDirection direction) {
  series.validate();
  std::vector<double> w = series.intensities;
  if (direction == EventDirection::rapid_weakening) std::reverse(w.begin(), w.end());
  std::vector<int> labels = label_forward(w, threshold);
  if (direction == EventDirection::rapid_weakening) std::reverse(labels.begin(), labels.end());
  return {series.times, std::move(labels), direction, threshold};
}

FineLabels interpolate_labels(const EventLabels& synoptic, std::size_t steps_per_interval) {
  if (steps_per_interval < 1)
    throw std::invalid_argument("interpolate_labels: steps_per_interval must be >= 1");
  if (synoptic.labels.size() != synoptic.times.size())
    throw std::invalid_argument("interpolate_labels: times and labels must have equal length");

  FineLabels fine;
  const std::size_t m = synoptic.labels.size();
  if (m == 0) return fine;
  if (m == 1) {
    fine.times.push_back(static_cast<double>(synoptic.times[0]));
    fine.labels.push_back(synoptic.labels[0]);
    return fine;
  }
  const std::int64_t step = synoptic.times[1] - synoptic.times[0];
  for (std::size_t i = 1; i < m; ++i)
    if (synoptic.times[i] - synoptic.times[i - 1] != step)
      throw std::invalid_argument("interpolate_labels: irregular synoptic spacing");
  const double dt = static_cast<double>(step);
  const std::size_t n_fine = (m - 1) * steps_per_interval + 1;
  fine.times.resize(n_fine);
  fine.labels.resize(n_fine);
  for (std::size_t j = 0; j < n_fine; ++j) {
    const std::size_t i = j / steps_per_interval;
    fine.times[j] = static_cast<double>(synoptic.times[0]) +
                    dt * static_cast<double>(j) / static_cast<double>(steps_per_interval);
    if (j % steps_per_interval == 0)
      fine.labels[j] = synoptic.labels[i];
    else
      fine.labels[j] = (synoptic.labels[i] == 1 && synoptic.labels[i + 1] == 1) ? 1 : 0;
  }
  return fine;
}

std::vector<int> decimate_labels(std::span<const int> labels, std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("decimate_labels: stride must be >= 1");
  std::vector<int> out;
  out.reserve(labels.size() / stride + 1);
  for (std::size_t i = 0; i < labels.size(); i += stride) out.push_back(labels[i]);
  return out;
}

IntensitySeries genesis_lysis_trim(const IntensitySeries& series, double min_intensity) {
  series.validate();
  const auto& w = series.intensities;
  std::size_t first = w.size(), last = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > min_intensity) {
      first = i;
      break;
    }
  for (std::size_t i = w.size(); i > 0; --i)
    if (w[i - 1] >= min_intensity) {
      last = i - 1;
      break;
    }
  IntensitySeries out;
  if (first >= w.size() || last < first) return out;
  out.times.assign(series.times.begin() + static_cast<std::ptrdiff_t>(first),
                   series.times.begin() + static_cast<std::ptrdiff_t>(last + 1));
  out.intensities.assign(w.begin() + static_cast<std::ptrdiff_t>(first),
                         w.begin() + static_cast<std::ptrdiff_t>(last + 1));
  return out;
}

IntensitySeries read_intensity_csv(std::istream& in, const std::string& name) {
  IntensitySeries series;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(name + ": empty input");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,w") throw std::runtime_error(name + ":1: expected header 't,w'");
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(name + ":" + std::to_string(lineno) + ": expected 2 fields");
    try {
      std::size_t pos = 0;
      series.times.push_back(std::stoll(line.substr(0, comma), &pos));
      if (pos != comma) throw std::invalid_argument("");
      series.intensities.push_back(std::stod(line.substr(comma + 1), &pos));
      if (pos != line.size() - comma - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error(name + ":" + std::to_string(lineno) + ": cannot parse row '" +
                               line + "'");
    }
  }
  series.validate();
  return series;
}

IntensitySeries read_intensity_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_intensity_csv(in, path);
}

namespace {
template <typename T>
void write_ty(std::ostream& out, const std::vector<T>& times, const std::vector<int>& labels) {
  out << "t,y\n";
  out.precision(17);
  for (std::size_t i = 0; i < times.size(); ++i) out << times[i] << ',' << labels[i] << '\n';
}
}  // namespace

void write_labels_csv(std::ostream& out, const EventLabels& labels) {
  write_ty(out, labels.times, labels.labels);
}

void write_labels_csv(std::ostream& out, const FineLabels& labels) {
  write_ty(out, labels.times, labels.labels);
}

void write_labels_csv_file(const std::string& path, const EventLabels& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_labels_csv(out, labels);
}

void write_labels_csv_file(const std::string& path, const FineLabels& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_labels_csv(out, labels);
}

}  // namespace seqtest
