#include "budding/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "budding/csv.hpp"

namespace budding {

double round1(double value) {
  const double r = std::round(value * 10.0) / 10.0;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

std::string fixed1(double value) { return fmt::format("{:.1f}", round1(value)); }

std::string percent1(double fraction) { return fixed1(100.0 * fraction) + "%"; }

std::string signed_points(double points) {
  const double r = round1(points);
  return fmt::format("{}{:.1f}%", r > 0.0 ? "+" : "", r);
}

std::string share_of(std::size_t count, std::size_t total) {
  const double fraction = total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
  return fmt::format("{} ({} of {})", percent1(fraction), count, total);
}

void write_csv(const Table& table, std::ostream& out) {
  CsvWriter csv(out);
  csv.row(table.header);
  for (const auto& row : table.rows) csv.row(row);
}

void write_markdown(const Table& table, std::ostream& out) {
  auto cell = [](const std::string& text) {
    std::string escaped;
    for (char c : text) {
      if (c == '|') escaped += '\\';
      escaped += c;
    }
    return escaped;
  };
  if (!table.title.empty()) out << "### " << table.title << "\n\n";
  out << '|';
  for (const auto& h : table.header) out << ' ' << cell(h) << " |";
  out << "\n|";
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i == 0 ? " :-- |" : " --: |");
  out << '\n';
  for (const auto& row : table.rows) {
    out << '|';
    for (const auto& c : row) out << ' ' << cell(c) << " |";
    out << '\n';
  }
  out << '\n';
}

std::string tables_to_json(std::span<const Table> tables) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& table : tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) {
        obj[table.header[i]] = row[i];
      }
      rows.push_back(std::move(obj));
    }
    doc[table.name] = {{"title", table.title}, {"rows", std::move(rows)}};
  }
  return doc.dump(2) + "\n";
}

namespace {

std::string uda_label(const Taxonomy& taxonomy, const std::string& code) {
  if (code.empty()) return "Total";
  const Uda* uda = taxonomy.find_uda(code);
  return uda ? uda->name : code;
}

}  // namespace

Table plan_table(const SizingPlan& plan, const Taxonomy& taxonomy) {
  Table t{"plan_by_uda", "Faculty by SDS and UDA", {"UDA", "SDS", "Faculty"}, {}};
  for (const auto& [uda_code, uda] : taxonomy.udas()) {
    for (const auto& sds : taxonomy.sds_in_uda(uda_code)) {
      auto it = plan.targets.find(sds);
      if (it == plan.targets.end()) continue;
      t.rows.push_back({uda.name, sds, std::to_string(it->second)});
    }
  }
  t.rows.push_back({"Total", "", std::to_string(plan.total())});
  return t;
}

Table rank_mix_table(const RankMixReport& report, const Taxonomy& taxonomy) {
  Table t{"rank_mix",
          "Composition of spin-off faculty per academic rank and UDA",
          {"UDA", "Full professors", "Associate professors", "Assistant professors"},
          {}};
  for (const auto& row : report.by_uda) {
    t.rows.push_back({uda_label(taxonomy, row.uda), std::to_string(row.counts[RankLevel::Full]),
                      std::to_string(row.counts[RankLevel::Associate]),
                      std::to_string(row.counts[RankLevel::Assistant])});
  }
  auto with_share = [](const RankCounts& c, RankLevel level) {
    return fmt::format("{} ({})", c[level], percent1(c.share(level)));
  };
  t.rows.push_back({"Total", with_share(report.total, RankLevel::Full),
                    with_share(report.total, RankLevel::Associate),
                    with_share(report.total, RankLevel::Assistant)});
  t.rows.push_back({"Total national", with_share(report.national, RankLevel::Full),
                    with_share(report.national, RankLevel::Associate),
                    with_share(report.national, RankLevel::Assistant)});
  t.rows.push_back({"Diff.", signed_points(report.displayed_delta_points[0]),
                    signed_points(report.displayed_delta_points[1]),
                    signed_points(report.displayed_delta_points[2])});
  return t;
}

Table parent_count_table(const ContributionReport& report, const Taxonomy& taxonomy,
                         std::string_view spinoff_name) {
  Table t{"parent_counts", "Parent universities of spin-off faculty, by UDA", {"UDA"}, {}};
  for (const auto& p : report.parents) t.header.push_back(p);
  t.header.emplace_back(spinoff_name);
  auto add = [&](const ContributionRow& row) {
    std::vector<std::string> cells{uda_label(taxonomy, row.uda)};
    for (const auto& c : row.cells) cells.push_back(c.selected == 0 ? "-" : std::to_string(c.selected));
    cells.push_back(std::to_string(row.selected));
    t.rows.push_back(std::move(cells));
  };
  for (const auto& row : report.by_uda) add(row);
  if (!report.by_uda.empty()) add(report.total);
  return t;
}

Table contribution_table(const ContributionReport& report, const Taxonomy& taxonomy) {
  Table t{"contribution",
          "Contribution to spin-off faculty from each parent (concentration in parentheses)",
          {"UDA"},
          {}};
  for (const auto& p : report.parents) t.header.push_back(p);
  auto add = [&](const ContributionRow& row) {
    std::vector<std::string> cells{uda_label(taxonomy, row.uda)};
    for (const auto& c : row.cells) {
      cells.push_back(fmt::format("{} ({:.2f})", percent1(c.share), c.concentration));
    }
    t.rows.push_back(std::move(cells));
  };
  for (const auto& row : report.by_uda) add(row);
  if (!report.by_uda.empty()) add(report.total);
  return t;
}

Table performance_table(const PerformanceReport& report) {
  Table t{"performance",
          "Research performance of spin-off faculty and comparison universities",
          {"School/University", "N", "Average percentile rank", "Faculty at or above 80th percentile",
           "Faculty at or above 90th percentile"},
          {}};
  auto add = [&](const PerformanceSummary& s) {
    if (s.n == 0) {
      t.rows.push_back({s.label, "0", "n/a", "n/a", "n/a"});
      return;
    }
    t.rows.push_back({s.label, std::to_string(s.n), fixed1(s.mean_percentile),
                      fixed1(100.0 * s.share_at_least_80), fixed1(100.0 * s.share_at_least_90)});
  };
  for (const auto& s : report.spinoff_by_uda) add(s);
  add(report.spinoff_total);
  for (const auto& s : report.comparisons) add(s);
  return t;
}

Table percentile_class_table(const PerformanceReport& report) {
  Table t{"percentile_classes", "Distribution of research performance by percentile class",
          {"Percentile class"}, {}};
  for (const auto& dist : report.classes) t.header.push_back(dist.label);
  for (std::size_t c = 0; c < kPercentileClasses.size(); ++c) {
    std::vector<std::string> row{
        fmt::format("{}{}", c == 0 ? "=" : ">=", static_cast<int>(kPercentileClasses[c]))};
    for (std::size_t d = 0; d < report.classes.size(); ++d) {
      const auto& dist = report.classes[d];
      if (dist.n == 0) {
        row.push_back("n/a");
      } else if (d == 0) {
        row.push_back(share_of(dist.counts[c], dist.n));
      } else {
        row.push_back(percent1(dist.share(c)));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cost_table(const CostTable& costs) {
  Table t{"costs", "Yearly cost of professors by academic rank",
          {"Academic rank", "Yearly average cost (kEUR)", "Equivalent cost"}, {}};
  for (AcademicRank rank : kAcademicRanks) {
    t.rows.push_back({describe(rank), fmt::format("{:.3f}", costs.yearly_cost(rank)),
                      fmt::format("{:.3f}", costs.equivalent(rank))});
  }
  return t;
}

Table sds_ranking_table(const NationalRankings& rankings, const Taxonomy& taxonomy,
                        std::string_view university) {
  Table t{"sds_productivity",
          fmt::format("Productivity and national rank of {} by SDS", university),
          {"SDS", "UDA", "P", "Rank", "Percentile"},
          {}};
  for (const auto& [sds, rows] : rankings.by_sds) {
    for (const auto& row : rows) {
      if (row.university != university) continue;
      const Sds* s = taxonomy.find_sds(sds);
      t.rows.push_back({sds, s ? uda_label(taxonomy, s->uda) : "", fmt::format("{:.2f}", row.value),
                        rank_display(row.rank, row.n_active), fixed1(row.percentile)});
    }
  }
  return t;
}

Table uda_ranking_table(const NationalRankings& rankings, const Taxonomy& taxonomy,
                        std::string_view university) {
  Table t{"uda_productivity",
          fmt::format("Productivity and national rank of {} by UDA", university),
          {"UDA", "P_U", "Rank", "Percentile"},
          {}};
  for (const auto& [uda, rows] : rankings.by_uda) {
    for (const auto& row : rows) {
      if (row.university != university) continue;
      t.rows.push_back({uda_label(taxonomy, uda), fmt::format("{:.2f}", row.value),
                        rank_display(row.rank, row.n_active), fixed1(row.percentile)});
    }
  }
  return t;
}

Table distribution_table(const NationalRankings& rankings, std::string_view highlight) {
  Table t{"distribution",
          "Overall productivity of universities",
          {"university", "value", "rank", "n_active", "percentile", "is_spinoff"},
          {}};
  for (const auto& row : rankings.overall) {
    t.rows.push_back({row.university, fmt::format("{}", row.value), std::to_string(row.rank),
                      std::to_string(row.n_active), fixed1(row.percentile),
                      row.university == highlight ? "true" : "false"});
  }
  return t;
}

}  // namespace budding
