#include "budding/normalize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>
#include <vector>

#include "budding/csv.hpp"

namespace budding {

const MedianCell* MedianTable::find(int year, std::string_view category) const {
  auto it = cells_.find(CellKey{year, std::string(category)});
  return it == cells_.end() ? nullptr : &it->second;
}

void MedianTable::set(int year, std::string category, MedianCell cell) {
  cells_.insert_or_assign(CellKey{year, std::move(category)}, cell);
}

MedianTable build_median_table(const Corpus& reference) {
  std::map<CellKey, std::vector<std::int64_t>> cited;
  for (const auto& pub : reference.publications()) {
    if (pub.citations < 1) continue;
    for (const auto& category : pub.subject_categories) {
      cited[CellKey{pub.year, category}].push_back(pub.citations);
    }
  }

  MedianTable table;
  for (auto& [key, values] : cited) {
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    std::int64_t twice = 2 * values[mid];
    if (n % 2 == 0) {
      const std::int64_t lower = *std::max_element(values.begin(), values.begin() + mid);
      twice = lower + values[mid];
    }
    table.set(key.year, key.category, MedianCell{n, twice});
  }
  return table;
}

StandardizedScore standardize_publication(const Publication& pub, const MedianTable& medians) {
  StandardizedScore score{pub.id, 0.0, false};
  if (pub.citations == 0) return score;

  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& category : pub.subject_categories) {
    const MedianCell* cell = medians.find(pub.year, category);
    if (!cell) continue;
    // c / (twice_median / 2) as one division of exact integers.
    sum += static_cast<double>(2 * pub.citations) / static_cast<double>(cell->twice_median);
    ++used;
  }
  if (used == 0) {
    score.undefined_baseline = true;
    return score;
  }
  score.value = used == 1 ? sum : sum / static_cast<double>(used);
  return score;
}

void write_medians_csv(const MedianTable& medians, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"year", "category", "n_cited", "median"});
  for (const auto& [key, cell] : medians.cells()) {
    csv.row({std::to_string(key.year), key.category, std::to_string(cell.n_cited),
             fmt::format("{}", cell.median())});
  }
}

}  // namespace budding
