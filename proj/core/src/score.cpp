#include "budding/score.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <tuple>

#include "budding/csv.hpp"
#include "budding/error.hpp"
#include "budding/percentile.hpp"
#include "records.hpp"

namespace budding {

ResearcherScore researcher_productivity(const Corpus& corpus, std::size_t researcher,
                                        const MedianTable& medians) {
  ResearcherScore score;
  score.researcher_id = corpus.researchers()[researcher].id;
  for (std::size_t p : corpus.publications_of(researcher)) {
    const Publication& pub = corpus.publications()[p];
    const StandardizedScore s = standardize_publication(pub, medians);
    score.p_r += s.value / static_cast<double>(pub.n_authors);
    ++score.n_pubs;
    if (s.undefined_baseline) ++score.undefined_baseline_pubs;
  }
  return score;
}

ScoreTable::ScoreTable(std::vector<ScoreRow> rows) : rows_(std::move(rows)) {
  index_.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!index_.emplace(rows_[i].researcher_id, i).second) {
      throw ValidationError(fmt::format("duplicate researcher '{}' in score table",
                                        rows_[i].researcher_id));
    }
  }
}

const ScoreRow* ScoreTable::find(std::string_view researcher_id) const {
  auto it = index_.find(std::string(researcher_id));
  return it == index_.end() ? nullptr : &rows_[it->second];
}

void assign_percentiles(std::span<ScoreRow> rows) {
  std::map<std::pair<std::string_view, RankLevel>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    groups[{rows[i].sds, rows[i].rank.level}].push_back(i);
  }
  std::vector<double> values;
  for (const auto& [key, members] : groups) {
    values.clear();
    for (std::size_t i : members) values.push_back(rows[i].p_r);
    const auto pct = midrank_percentiles(values);
    for (std::size_t k = 0; k < members.size(); ++k) {
      rows[members[k]].percentile = pct[k];
      rows[members[k]].group_size = members.size();
    }
  }
}

ScoreTable score_corpus(const Corpus& corpus, const MedianTable& medians) {
  const auto pubs = corpus.publications();
  std::vector<double> credit(pubs.size());
  std::vector<bool> undefined(pubs.size());
  for (std::size_t p = 0; p < pubs.size(); ++p) {
    const StandardizedScore s = standardize_publication(pubs[p], medians);
    credit[p] = s.value / static_cast<double>(pubs[p].n_authors);
    undefined[p] = s.undefined_baseline;
  }

  std::vector<ScoreRow> rows;
  rows.reserve(corpus.researchers().size());
  for (std::size_t r = 0; r < corpus.researchers().size(); ++r) {
    const Researcher& researcher = corpus.researchers()[r];
    ScoreRow row;
    row.researcher_id = researcher.id;
    row.university = researcher.university;
    row.sds = researcher.sds;
    row.rank = researcher.rank;
    for (std::size_t p : corpus.publications_of(r)) {
      row.p_r += credit[p];
      ++row.n_pubs;
    }
    rows.push_back(std::move(row));
  }
  assign_percentiles(rows);
  return ScoreTable(std::move(rows));
}

ThresholdShares threshold_shares(std::span<const double> percentiles,
                                 std::span<const double> cutoffs) {
  if (percentiles.empty()) throw ValidationError("threshold shares over an empty population");
  ThresholdShares out;
  out.population = percentiles.size();
  const double n = static_cast<double>(percentiles.size());
  for (double cutoff : cutoffs) {
    const auto hits = std::count_if(percentiles.begin(), percentiles.end(),
                                    [&](double p) { return p >= cutoff; });
    out.at_least.push_back(static_cast<double>(hits) / n);
  }
  const auto top = std::count(percentiles.begin(), percentiles.end(), 100.0);
  out.top_class = static_cast<double>(top) / n;
  return out;
}

ThresholdShares threshold_shares(const ScoreTable& table,
                                 std::span<const std::string> universities,
                                 std::span<const double> cutoffs) {
  std::vector<double> percentiles;
  for (const auto& row : table.rows()) {
    if (universities.empty() ||
        std::find(universities.begin(), universities.end(), row.university) != universities.end()) {
      percentiles.push_back(row.percentile);
    }
  }
  if (percentiles.empty()) {
    throw ValidationError("no researchers match the university filter");
  }
  return threshold_shares(percentiles, cutoffs);
}

void write_scores_csv(const ScoreTable& table, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"researcher_id", "university", "sds", "rank", "p_r", "percentile"});
  for (const auto& row : table.rows()) {
    csv.row({row.researcher_id, row.university, row.sds, std::string(to_string(row.rank.level)),
             fmt::format("{}", row.p_r), fmt::format("{:.1f}", row.percentile)});
  }
}

ScoreTable read_scores_csv(const std::filesystem::path& path, const Corpus* corpus) {
  static constexpr std::string_view kFields[] = {"researcher_id", "university", "sds", "rank",
                                                 "p_r"};
  auto set = detail::read_records(path, kFields);
  std::vector<ScoreRow> rows;
  std::vector<std::string> issues;
  rows.reserve(set.records.size());
  for (const auto& rec : set.records) {
    try {
      ScoreRow row;
      row.researcher_id = rec.values[0];
      row.university = rec.values[1];
      row.sds = rec.values[2];
      row.rank.level = parse_rank_level(rec.values[3]);
      const std::string& text = rec.values[4];
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), row.p_r);
      if (ec != std::errc{} || ptr != text.data() + text.size() || row.p_r < 0.0) {
        throw ValidationError(fmt::format("invalid p_r '{}'", text));
      }
      if (corpus) {
        const Researcher* r = corpus->find_researcher(row.researcher_id);
        if (!r) throw ValidationError(fmt::format("unknown researcher '{}'", row.researcher_id));
        row.rank.confirmed = r->rank.confirmed;
        row.n_pubs = corpus->publications_of(*corpus->researcher_index(row.researcher_id)).size();
      }
      rows.push_back(std::move(row));
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  assign_percentiles(rows);
  return ScoreTable(std::move(rows));
}

}  // namespace budding
