#ifndef SEQTEST_SERIES_HPP
#define SEQTEST_SERIES_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "seqtest/rng.hpp"

namespace seqtest {

/// Time-indexed pairs of a scalar covariate and a binary label.
struct LabeledSeries {
  std::vector<std::int64_t> times;   // strictly increasing
  std::vector<double> covariates;    // S_t
  std::vector<int> labels;           // Y_t in {0,1}

  std::size_t size() const { return times.size(); }

  /// Throws std::invalid_argument on any invariant violation.
  void validate() const;
};

/// Disjoint index subsets: regression training set, label holdout set and
/// evaluation set. Indices are 0-based positions into a LabeledSeries.
struct SplitSpec {
  std::vector<std::size_t> t1;  // regression training
  std::vector<std::size_t> t2;  // label holdout
  std::vector<std::size_t> v;   // evaluation points

  /// Throws if the three sets overlap or reference indices >= n.
  void validate(std::size_t n) const;
};

enum class SplitMode {
  contiguous_blocks,  // default; respects temporal dependence
  interleaved         // random point-level assignment (IID data only)
};

/// Partition a series into the three working sets. Fractions must be
/// nonnegative and sum to at most 1; each block must be nonempty.
SplitSpec split_series(const LabeledSeries& series,
                       const std::array<double, 3>& fractions, Rng& rng,
                       SplitMode mode = SplitMode::contiguous_blocks);

/// Maximal runs of consecutive indices, as (first, length) pairs.
/// Input must be sorted ascending.
std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(
    const std::vector<std::size_t>& indices);

// CSV with header "t,s,y".
LabeledSeries read_series_csv(std::istream& in, const std::string& name = "<stream>");
LabeledSeries read_series_csv_file(const std::string& path);
void write_series_csv(std::ostream& out, const LabeledSeries& series);
void write_series_csv_file(const std::string& path, const LabeledSeries& series);

// CSV with header "index,set", set in {t1,t2,v}.
SplitSpec read_splits_csv(std::istream& in, std::size_t series_length,
                          const std::string& name = "<stream>");
SplitSpec read_splits_csv_file(const std::string& path, std::size_t series_length);
void write_splits_csv(std::ostream& out, const SplitSpec& splits);
void write_splits_csv_file(const std::string& path, const SplitSpec& splits);

}  // namespace seqtest

#endif
