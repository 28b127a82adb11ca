#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace unseen {

/// Prevalences of a sample: entry (i, c) says c distinct symbols occurred
/// exactly i times. Only multiplicities i >= 1 with c >= 1 are stored; the
/// number of unobserved symbols is never represented.
///
/// Instances are immutable once built.
class PrevalenceHistogram {
 public:
  using Entries = std::map<std::uint64_t, std::uint64_t>;

  PrevalenceHistogram() = default;

  /// Builds from (multiplicity -> count) pairs. Zero counts are dropped;
  /// multiplicity 0 is rejected.
  static PrevalenceHistogram from_prevalences(const Entries& entries);

  /// Builds from per-symbol occurrence counts; zero counts are ignored.
  static PrevalenceHistogram from_counts(std::span<const std::uint64_t> counts);

  /// Number of distinct symbols seen exactly `multiplicity` times.
  std::uint64_t prevalence(std::uint64_t multiplicity) const;

  /// Largest multiplicity with a nonzero prevalence, 0 when empty.
  std::uint64_t max_index() const;

  /// Number of distinct observed symbols, sum of all prevalences.
  std::uint64_t observed_count() const;

  /// Number of samples, sum of multiplicity * prevalence.
  std::uint64_t sample_size() const;

  bool empty() const { return entries_.empty(); }
  const Entries& entries() const { return entries_; }

  /// Histogram of the disjoint union of two samples over disjoint alphabets.
  PrevalenceHistogram merged_with(const PrevalenceHistogram& other) const;

  friend bool operator==(const PrevalenceHistogram&, const PrevalenceHistogram&) = default;

 private:
  Entries entries_;
};

/// Prevalence histogram of a sequence of opaque symbols.
PrevalenceHistogram build_histogram(std::span<const std::string> samples);

/// Same, with each byte of `text` taken as one symbol ("bananas").
PrevalenceHistogram build_histogram_from_chars(std::string_view text);

/// Reads `frequency,count` CSV. Throws InvalidArgument on malformed input.
PrevalenceHistogram read_histogram_csv(std::istream& in);
PrevalenceHistogram read_histogram_csv_file(const std::string& path);

/// Writes `frequency,count` CSV, ascending frequency, LF line endings.
void write_histogram_csv(std::ostream& out, const PrevalenceHistogram& hist);

}  // namespace unseen
