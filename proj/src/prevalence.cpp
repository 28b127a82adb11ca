#include "unseen/prevalence.hpp"

#include <fstream>
#include <unordered_map>

#include "csv_util.hpp"
#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

PrevalenceHistogram PrevalenceHistogram::from_prevalences(const Entries& entries) {
  PrevalenceHistogram hist;
  for (const auto& [multiplicity, count] : entries) {
    if (multiplicity == 0) {
      throw InvalidArgument("prevalence of multiplicity 0 is not representable");
    }
    if (count > 0) {
      hist.entries_.emplace(multiplicity, count);
    }
  }
  return hist;
}

PrevalenceHistogram PrevalenceHistogram::from_counts(std::span<const std::uint64_t> counts) {
  PrevalenceHistogram hist;
  for (std::uint64_t c : counts) {
    if (c > 0) {
      ++hist.entries_[c];
    }
  }
  return hist;
}

std::uint64_t PrevalenceHistogram::prevalence(std::uint64_t multiplicity) const {
  const auto it = entries_.find(multiplicity);
  return it == entries_.end() ? 0 : it->second;
}

std::uint64_t PrevalenceHistogram::max_index() const {
  return entries_.empty() ? 0 : entries_.rbegin()->first;
}

std::uint64_t PrevalenceHistogram::observed_count() const {
  std::uint64_t total = 0;
  for (const auto& [multiplicity, count] : entries_) {
    total += count;
  }
  return total;
}

std::uint64_t PrevalenceHistogram::sample_size() const {
  std::uint64_t total = 0;
  for (const auto& [multiplicity, count] : entries_) {
    total += multiplicity * count;
  }
  return total;
}

PrevalenceHistogram PrevalenceHistogram::merged_with(const PrevalenceHistogram& other) const {
  PrevalenceHistogram merged = *this;
  for (const auto& [multiplicity, count] : other.entries_) {
    merged.entries_[multiplicity] += count;
  }
  return merged;
}

PrevalenceHistogram build_histogram(std::span<const std::string> samples) {
  std::unordered_map<std::string_view, std::uint64_t> counts;
  counts.reserve(samples.size());
  for (const auto& symbol : samples) {
    ++counts[symbol];
  }
  PrevalenceHistogram::Entries entries;
  for (const auto& [symbol, count] : counts) {
    ++entries[count];
  }
  return PrevalenceHistogram::from_prevalences(entries);
}

PrevalenceHistogram build_histogram_from_chars(std::string_view text) {
  std::uint64_t counts[256] = {};
  for (unsigned char c : text) {
    ++counts[c];
  }
  return PrevalenceHistogram::from_counts(counts);
}

PrevalenceHistogram read_histogram_csv(std::istream& in) {
  detail::expect_header(in, "frequency,count");
  PrevalenceHistogram::Entries entries;
  std::string line;
  std::size_t line_no = 1;
  while (detail::next_line(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    std::uint64_t frequency = 0;
    std::uint64_t count = 0;
    try {
      frequency = parse_uint(fields[0]);
      count = parse_uint(fields[1]);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (frequency == 0) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": frequency must be >= 1");
    }
    if (!entries.emplace(frequency, count).second) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate frequency " +
                            fields[0]);
    }
  }
  return PrevalenceHistogram::from_prevalences(entries);
}

PrevalenceHistogram read_histogram_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot open histogram file '" + path + "'");
  }
  return read_histogram_csv(in);
}

void write_histogram_csv(std::ostream& out, const PrevalenceHistogram& hist) {
  out << "frequency,count\n";
  for (const auto& [multiplicity, count] : hist.entries()) {
    out << multiplicity << ',' << count << '\n';
  }
}

}  // namespace unseen
