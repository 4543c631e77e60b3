#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "budding/corpus.hpp"

namespace budding {

struct CellKey {
  int year = 0;
  std::string category;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

// Median of the cited-only (citations >= 1) publications in one
// (year, subject category) cell. Stored doubled so that even-count medians
// stay integral and c / median is a single correctly rounded division.
struct MedianCell {
  std::size_t n_cited = 0;
  std::int64_t twice_median = 0;

  double median() const { return static_cast<double>(twice_median) / 2.0; }
};

class MedianTable {
 public:
  const MedianCell* find(int year, std::string_view category) const;

  void set(int year, std::string category, MedianCell cell);

  const std::map<CellKey, MedianCell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

 private:
  std::map<CellKey, MedianCell> cells_;
};

// Cells with no cited publication are absent. Even counts use the mean of the
// two middle values.
MedianTable build_median_table(const Corpus& reference);

struct StandardizedScore {
  std::string publication_id;
  double value = 0.0;
  // Cited publication none of whose categories has a baseline; value is 0.
  bool undefined_baseline = false;
};

// c / m for a single category; for several categories the mean of c / m over
// the categories that have a baseline.
StandardizedScore standardize_publication(const Publication& pub, const MedianTable& medians);

// year,category,n_cited,median
void write_medians_csv(const MedianTable& medians, std::ostream& out);

}  // namespace budding
