#ifndef SEQTEST_EVENTLABEL_HPP
#define SEQTEST_EVENTLABEL_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seqtest {

/// Storm intensity (maximum wind speed, knots) at regular 6-hour steps.
struct IntensitySeries {
  std::vector<std::int64_t> times;
  std::vector<double> intensities;

  std::size_t size() const { return times.size(); }
  void validate() const;  // throws on irregular spacing
};

enum class EventDirection { rapid_intensification, rapid_weakening };

struct EventLabels {
  std::vector<std::int64_t> times;
  std::vector<int> labels;
  EventDirection direction = EventDirection::rapid_intensification;
  double threshold = 0.0;  // knots per 24 hours
};

/// Fine-resolution labels produced by interpolation; times may fall
/// between synoptic steps.
struct FineLabels {
  std::vector<double> times;
  std::vector<int> labels;
};

/// Label rapid intensity change events: flag every 24-hour window (five
/// 6-hour points) whose intensity rise from its first point is at least
/// `threshold`, trim each flagged window until it begins and ends with a
/// 6-hour intensification, and mark a point 1 when any trimmed window
/// covers it. Rapid weakening is the same procedure on the time-reversed
/// series, with the output reversed back.
EventLabels label_rapid_events(const IntensitySeries& series, double threshold,
                               EventDirection direction);

/// Fill synoptic labels to a finer grid: a fine point is 1 when it sits on
/// a synoptic 1 or strictly between two consecutive synoptic 1s.
FineLabels interpolate_labels(const EventLabels& synoptic, std::size_t steps_per_interval);

/// Keep every stride-th label starting at the first: the inverse workflow
/// of interpolate_labels, for fitting label models at a coarser resolution.
std::vector<int> decimate_labels(std::span<const int> labels, std::size_t stride);

/// Restrict a track to its mature phase: from the first time intensity
/// surpasses min_intensity through the last time it is still at least
/// min_intensity. Returns an empty series if the storm never qualifies.
IntensitySeries genesis_lysis_trim(const IntensitySeries& series, double min_intensity = 35.0);

// CSV with header "t,w".
IntensitySeries read_intensity_csv(std::istream& in, const std::string& name = "<stream>");
IntensitySeries read_intensity_csv_file(const std::string& path);

// CSV with header "t,y".
void write_labels_csv(std::ostream& out, const EventLabels& labels);
void write_labels_csv(std::ostream& out, const FineLabels& labels);
void write_labels_csv_file(const std::string& path, const EventLabels& labels);
void write_labels_csv_file(const std::string& path, const FineLabels& labels);

}  // namespace seqtest

#endif
