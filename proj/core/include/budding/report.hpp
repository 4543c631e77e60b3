#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "budding/aggregate.hpp"
#include "budding/corpus.hpp"
#include "budding/spinoff.hpp"

namespace budding {

// A rendered report table. Cells are already formatted strings so the CSV,
// Markdown and JSON renderings agree.
struct Table {
  std::string name;   // file stem, e.g. "rank_mix"
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// 0.3522 -> "35.2%"
std::string percent1(double fraction);
// 88.75 -> "88.8"
std::string fixed1(double value);
// Percentage points with explicit sign: "+1.6%", "-3.8%".
std::string signed_points(double points);
// "57.5% (142 of 247)"
std::string share_of(std::size_t count, std::size_t total);
// Rounds to one decimal the way the tables print it.
double round1(double value);

void write_csv(const Table& table, std::ostream& out);
void write_markdown(const Table& table, std::ostream& out);
std::string tables_to_json(std::span<const Table> tables);

Table plan_table(const SizingPlan& plan, const Taxonomy& taxonomy);
Table rank_mix_table(const RankMixReport& report, const Taxonomy& taxonomy);
Table parent_count_table(const ContributionReport& report, const Taxonomy& taxonomy,
                         std::string_view spinoff_name);
Table contribution_table(const ContributionReport& report, const Taxonomy& taxonomy);
Table performance_table(const PerformanceReport& report);
Table percentile_class_table(const PerformanceReport& report);
Table cost_table(const CostTable& costs);
// Rows for `university` in every SDS it is active in: value, "r out of N", percentile.
Table sds_ranking_table(const NationalRankings& rankings, const Taxonomy& taxonomy,
                        std::string_view university);
Table uda_ranking_table(const NationalRankings& rankings, const Taxonomy& taxonomy,
                        std::string_view university);
// Overall productivity of every university, best first.
Table distribution_table(const NationalRankings& rankings, std::string_view highlight);

}  // namespace budding
