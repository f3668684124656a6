#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "seqtest/eventlabel.hpp"
#include "seqtest/rng.hpp"

using namespace seqtest;

namespace {

IntensitySeries make_series(const std::vector<double>& w) {
  IntensitySeries s;
  for (std::size_t i = 0; i < w.size(); ++i) s.times.push_back(static_cast<std::int64_t>(6 * i));
  s.intensities = w;
  return s;
}

std::vector<double> random_walk(Rng& rng, std::size_t len) {
  std::vector<double> w(len);
  double v = 40.0 + 30.0 * rng.uniform01();
  for (double& x : w) {
    x = v;
    // 6-hourly changes in 5-knot steps, flats included
    v += 5.0 * static_cast<double>(static_cast<int>(rng.below(7)) - 3);
  }
  return w;
}

}  // namespace

TEST_CASE("steady intensification labels the whole window") {
  const auto labels =
      label_rapid_events(make_series({35, 45, 55, 65, 75}), 25.0,
                         EventDirection::rapid_intensification);
  CHECK(labels.labels == std::vector<int>{1, 1, 1, 1, 1});
}

TEST_CASE("constant intensity yields no events") {
  const auto series = make_series(std::vector<double>(10, 50.0));
  for (const auto dir :
       {EventDirection::rapid_intensification, EventDirection::rapid_weakening}) {
    const auto labels = label_rapid_events(series, 25.0, dir);
    for (int y : labels.labels) CHECK(y == 0);
  }
}

TEST_CASE("flat tail is trimmed from the end of the event") {
  const auto labels =
      label_rapid_events(make_series({35, 65, 65, 65, 65}), 25.0,
                         EventDirection::rapid_intensification);
  CHECK(labels.labels == std::vector<int>{1, 1, 0, 0, 0});
}

TEST_CASE("flat head is trimmed from the start of the event") {
  const auto labels =
      label_rapid_events(make_series({65, 65, 65, 65, 100}), 25.0,
                         EventDirection::rapid_intensification);
  CHECK(labels.labels == std::vector<int>{0, 0, 0, 1, 1});
}

TEST_CASE("series shorter than a 24-hour window gets no labels") {
  const auto labels = label_rapid_events(make_series({35, 45, 55, 65}), 25.0,
                                         EventDirection::rapid_intensification);
  CHECK(labels.labels == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("rapid weakening is the time reversal of rapid intensification") {
  Rng rng(15);
  for (int round = 0; round < 200; ++round) {
    const auto w = random_walk(rng, 5 + rng.below(26));
    const auto rw = label_rapid_events(make_series(w), 25.0, EventDirection::rapid_weakening);
    auto reversed = w;
    std::reverse(reversed.begin(), reversed.end());
    auto ri_rev =
        label_rapid_events(make_series(reversed), 25.0, EventDirection::rapid_intensification);
    std::reverse(ri_rev.labels.begin(), ri_rev.labels.end());
    CHECK(rw.labels == ri_rev.labels);
  }
}

TEST_CASE("labels match the brute-force window/trim oracle") {
  Rng rng(16);
  for (int round = 0; round < 1000; ++round) {
    const auto w = random_walk(rng, 1 + rng.below(30));
    const auto got = label_rapid_events(make_series(w), 25.0,
                                        EventDirection::rapid_intensification);
    CHECK(got.labels == oracles::rapid_labels_bruteforce(w, 25.0));
  }
}

TEST_CASE("on trend-shaped tracks RI and RW share only event boundaries") {
  // Piecewise monotone tracks (rise / plateau / fall phases) have no large
  // reversals inside a single 24-hour window, the regime where the
  // boundary-sharing property holds.
  Rng rng(17);
  std::size_t shared = 0;
  for (int round = 0; round < 500; ++round) {
    std::vector<double> w;
    double v = 40.0 + 30.0 * rng.uniform01();
    const std::size_t phases = 2 + rng.below(4);
    for (std::size_t ph = 0; ph < phases; ++ph) {
      const int sign = static_cast<int>(rng.below(3)) - 1;  // fall, plateau, rise
      const std::size_t len = 5 + rng.below(8);
      for (std::size_t i = 0; i < len; ++i) {
        w.push_back(v);
        v += sign * 5.0 * static_cast<double>(rng.below(4));
      }
    }
    const auto series = make_series(w);
    const auto ri = label_rapid_events(series, 25.0, EventDirection::rapid_intensification);
    const auto rw = label_rapid_events(series, 25.0, EventDirection::rapid_weakening);

    const auto ri_intervals = oracles::rapid_intervals_bruteforce(w, 25.0);
    auto reversed = w;
    std::reverse(reversed.begin(), reversed.end());
    auto rw_intervals = oracles::rapid_intervals_bruteforce(reversed, 25.0);
    for (auto& [lo, hi] : rw_intervals) {
      const std::size_t new_lo = w.size() - 1 - hi;
      const std::size_t new_hi = w.size() - 1 - lo;
      lo = new_lo;
      hi = new_hi;
    }

    for (std::size_t t = 0; t < w.size(); ++t) {
      if (ri.labels[t] != 1 || rw.labels[t] != 1) continue;
      ++shared;
      const bool ri_endpoint =
          std::any_of(ri_intervals.begin(), ri_intervals.end(),
                      [&](const auto& iv) { return iv.first == t || iv.second == t; });
      const bool rw_endpoint =
          std::any_of(rw_intervals.begin(), rw_intervals.end(),
                      [&](const auto& iv) { return iv.first == t || iv.second == t; });
      CHECK(ri_endpoint);
      CHECK(rw_endpoint);
    }
  }
  CHECK(shared > 0);  // the tracks did exercise RI-to-RW turnarounds
}

TEST_CASE("a large reversal inside one window can make RI and RW overlap") {
  // A V-shaped dip inside an intensifying 24-hour window is kept by the
  // trimming (the window still begins and ends with intensification), while
  // the dip itself qualifies as rapid weakening. Frozen here as documented
  // behavior; the oracle agrees.
  const std::vector<double> w{35, 75, 45, 85, 125, 45, 45, 45, 45};
  const auto series = make_series(w);
  const auto ri = label_rapid_events(series, 25.0, EventDirection::rapid_intensification);
  const auto rw = label_rapid_events(series, 25.0, EventDirection::rapid_weakening);
  CHECK(ri.labels == oracles::rapid_labels_bruteforce(w, 25.0));
  std::size_t both = 0;
  for (std::size_t t = 0; t < w.size(); ++t)
    if (ri.labels[t] == 1 && rw.labels[t] == 1) ++both;
  CHECK(both > 1);
}

TEST_CASE("interpolation fills between consecutive synoptic ones") {
  EventLabels synoptic;
  synoptic.times = {0, 6};
  synoptic.labels = {1, 1};
  const auto fine = interpolate_labels(synoptic, 12);
  REQUIRE(fine.labels.size() == 13);
  for (int y : fine.labels) CHECK(y == 1);
  CHECK(fine.times.front() == 0.0);
  CHECK(fine.times.back() == 6.0);
  CHECK(fine.times[1] == doctest::Approx(0.5));

  synoptic.labels = {1, 0};
  const auto half = interpolate_labels(synoptic, 12);
  CHECK(half.labels.front() == 1);
  for (std::size_t j = 1; j < half.labels.size(); ++j) CHECK(half.labels[j] == 0);

  synoptic.labels = {0, 0};
  for (int y : interpolate_labels(synoptic, 12).labels) CHECK(y == 0);
}

TEST_CASE("decimation inverts interpolation at synoptic points") {
  EventLabels synoptic;
  synoptic.times = {0, 6, 12, 18};
  synoptic.labels = {0, 1, 1, 0};
  const auto fine = interpolate_labels(synoptic, 12);
  CHECK(decimate_labels(fine.labels, 12) == synoptic.labels);
  CHECK(decimate_labels(std::vector<int>{1, 0, 1}, 1) == std::vector<int>{1, 0, 1});
  CHECK_THROWS(decimate_labels(std::vector<int>{1}, 0));
}

TEST_CASE("interpolation with one step is the identity") {
  EventLabels synoptic;
  synoptic.times = {0, 6, 12, 18};
  synoptic.labels = {0, 1, 1, 0};
  const auto fine = interpolate_labels(synoptic, 1);
  CHECK(fine.labels == synoptic.labels);
}

TEST_CASE("irregular spacing is rejected") {
  IntensitySeries series;
  series.times = {0, 6, 18};
  series.intensities = {35, 40, 45};
  CHECK_THROWS_AS(series.validate(), std::invalid_argument);
  CHECK_THROWS(label_rapid_events(series, 25.0, EventDirection::rapid_intensification));
}

TEST_CASE("genesis/lysis trimming") {
  const auto trimmed = genesis_lysis_trim(make_series({20, 40, 20, 40, 20}), 35.0);
  REQUIRE(trimmed.times.size() == 3);
  CHECK(trimmed.times.front() == 6);
  CHECK(trimmed.intensities == std::vector<double>{40, 20, 40});

  const auto none = genesis_lysis_trim(make_series({20, 25, 30}), 35.0);
  CHECK(none.times.empty());
}

TEST_CASE("intensity CSV parsing") {
  std::stringstream good("t,w\n0,35\n6,45.5\n12,50\n");
  const auto series = read_intensity_csv(good);
  CHECK(series.intensities[1] == 45.5);

  std::stringstream bad_header("time,wind\n0,35\n");
  CHECK_THROWS(read_intensity_csv(bad_header));
  std::stringstream bad_row("t,w\n0,35\n6,abc\n");
  CHECK_THROWS_WITH_AS(read_intensity_csv(bad_row, "in.csv"), doctest::Contains("in.csv:3"),
                       std::runtime_error);
}
