#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "budding/corpus.hpp"
#include "budding/normalize.hpp"

namespace budding {

struct ResearcherScore {
  std::string researcher_id;
  double p_r = 0.0;
  std::size_t n_pubs = 0;
  std::size_t undefined_baseline_pubs = 0;
};

// Sum over the researcher's publications of standardized impact divided by the
// publication's author count.
ResearcherScore researcher_productivity(const Corpus& corpus, std::size_t researcher,
                                        const MedianTable& medians);

struct ScoreRow {
  std::string researcher_id;
  std::string university;
  std::string sds;
  AcademicRank rank;
  double p_r = 0.0;
  std::size_t n_pubs = 0;
  // National percentile within (sds, rank level).
  double percentile = 0.0;
  std::size_t group_size = 0;

  // Sole member of its (sds, rank level) group.
  bool degenerate_group() const { return group_size == 1; }
};

class ScoreTable {
 public:
  ScoreTable() = default;
  explicit ScoreTable(std::vector<ScoreRow> rows);

  std::span<const ScoreRow> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  const ScoreRow* find(std::string_view researcher_id) const;

 private:
  std::vector<ScoreRow> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Groups rows by (sds, rank level), confirmation status ignored, and fills
// percentile and group_size with midrank_percentiles().
void assign_percentiles(std::span<ScoreRow> rows);

// Scores every researcher in the corpus and assigns national percentiles.
ScoreTable score_corpus(const Corpus& corpus, const MedianTable& medians);

struct ThresholdShares {
  std::size_t population = 0;
  // Fraction with percentile >= cutoff, one per cutoff.
  std::vector<double> at_least;
  // Fraction with percentile == 100.
  double top_class = 0.0;
};

// Throws ValidationError if the filtered population is empty. An empty
// `universities` span selects every row.
ThresholdShares threshold_shares(const ScoreTable& table,
                                 std::span<const std::string> universities,
                                 std::span<const double> cutoffs);
ThresholdShares threshold_shares(std::span<const double> percentiles,
                                 std::span<const double> cutoffs);

// researcher_id,university,sds,rank,p_r,percentile
void write_scores_csv(const ScoreTable& table, std::ostream& out);

// Reads a scores file back; rank levels come from the file, confirmation
// status from `corpus` when given. Percentiles are recomputed from p_r.
ScoreTable read_scores_csv(const std::filesystem::path& path, const Corpus* corpus = nullptr);

}  // namespace budding
