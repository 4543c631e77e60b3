#include "budding/aggregate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>
#include <tuple>

#include "budding/csv.hpp"
#include "budding/error.hpp"
#include "budding/percentile.hpp"
#include "records.hpp"

namespace budding {

SalaryTable default_salaries() {
  return {
      {{RankLevel::Full, true}, 124.939},
      {{RankLevel::Full, false}, 94.442},
      {{RankLevel::Associate, true}, 90.622},
      {{RankLevel::Associate, false}, 68.469},
      {{RankLevel::Assistant, true}, 68.844},
      {{RankLevel::Assistant, false}, 44.899},
  };
}

SalaryTable read_salaries_csv(const std::filesystem::path& path) {
  static constexpr std::string_view kFields[] = {"rank_level", "confirmed", "yearly_cost_keur"};
  auto set = detail::read_records(path, kFields);
  SalaryTable salaries;
  std::vector<std::string> issues;
  for (const auto& rec : set.records) {
    try {
      AcademicRank rank{parse_rank_level(rec.values[0]), parse_bool(rec.values[1])};
      double cost = 0.0;
      const std::string& text = rec.values[2];
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cost);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(fmt::format("invalid yearly_cost_keur '{}'", text));
      }
      if (!salaries.emplace(rank, cost).second) {
        throw ValidationError(fmt::format("duplicate entry for {}", describe(rank)));
      }
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return salaries;
}

CostTable::CostTable() : CostTable(cost_equivalents(default_salaries())) {}

CostTable cost_equivalents(const SalaryTable& salaries) {
  std::vector<std::string> issues;
  for (AcademicRank rank : kAcademicRanks) {
    auto it = salaries.find(rank);
    if (it == salaries.end()) {
      issues.push_back(fmt::format("salary table is missing {}", describe(rank)));
    } else if (!(it->second > 0.0)) {
      issues.push_back(fmt::format("non-positive yearly cost {} for {}", it->second, describe(rank)));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  CostTable table{CostTable::Uninitialized{}};
  const double base = salaries.at(CostTable::kBaseRank);
  for (AcademicRank rank : kAcademicRanks) {
    const double cost = salaries.at(rank);
    table.cost_[rank.index()] = cost;
    table.equivalent_[rank.index()] = rank == CostTable::kBaseRank ? 1.0 : cost / base;
  }
  return table;
}

// ---------------------------------------------------------------------------
// SDS productivity

std::optional<SdsProductivity> sds_productivity(std::string_view university, std::string_view sds,
                                                const ScoreTable& scores, const CostTable& costs) {
  SdsProductivity out;
  out.university = std::string(university);
  out.sds = std::string(sds);
  for (const auto& row : scores.rows()) {
    if (row.university != university || row.sds != sds) continue;
    out.total_pr += row.p_r;
    out.total_cost += costs.equivalent(row.rank);
    ++out.n_staff;
  }
  if (out.n_staff == 0) return std::nullopt;
  out.p_s = out.total_pr / out.total_cost;
  return out;
}

std::vector<SdsProductivity> all_sds_productivities(const ScoreTable& scores,
                                                    const CostTable& costs) {
  std::map<std::pair<std::string_view, std::string_view>, SdsProductivity> cells;
  for (const auto& row : scores.rows()) {
    auto [it, inserted] = cells.try_emplace({row.sds, row.university});
    SdsProductivity& cell = it->second;
    if (inserted) {
      cell.university = row.university;
      cell.sds = row.sds;
    }
    cell.total_pr += row.p_r;
    cell.total_cost += costs.equivalent(row.rank);
    ++cell.n_staff;
  }
  std::vector<SdsProductivity> out;
  out.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    cell.p_s = cell.total_pr / cell.total_cost;
    out.push_back(std::move(cell));
  }
  return out;
}

std::vector<SdsProductivity> freeze_universities(std::span<const SdsProductivity> current,
                                                 std::span<const SdsProductivity> baseline,
                                                 std::span<const std::string> universities) {
  auto frozen = [&](const std::string& u) {
    return std::find(universities.begin(), universities.end(), u) != universities.end();
  };
  std::vector<SdsProductivity> out;
  for (const auto& p : current) {
    if (!frozen(p.university)) out.push_back(p);
  }
  for (const auto& p : baseline) {
    if (frozen(p.university)) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const SdsProductivity& a, const SdsProductivity& b) {
    return std::tie(a.sds, a.university) < std::tie(b.sds, b.university);
  });
  return out;
}

std::map<std::string, double> national_sds_means(std::span<const SdsProductivity> prods,
                                                 MeanMode mode) {
  struct Acc {
    double sum = 0.0;
    double weight = 0.0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& p : prods) {
    Acc& a = acc[p.sds];
    if (mode == MeanMode::Unweighted) {
      a.sum += p.p_s;
      a.weight += 1.0;
    } else {
      a.sum += p.p_s * p.total_cost;
      a.weight += p.total_cost;
    }
  }
  std::map<std::string, double> means;
  for (const auto& [sds, a] : acc) means.emplace(sds, a.sum / a.weight);
  return means;
}

// ---------------------------------------------------------------------------
// Weighted (UDA / university) productivity

double WeightedProductivity::weight_sum() const {
  double sum = 0.0;
  for (const auto& c : components) sum += c.weight;
  return sum;
}

namespace {

template <typename Pred>
WeightedProductivity weighted_productivity(std::string_view university, std::string scope,
                                           std::span<const SdsProductivity> prods,
                                           const std::map<std::string, double>& means,
                                           Pred in_scope) {
  WeightedProductivity out;
  out.university = std::string(university);
  out.scope = std::move(scope);
  double total_cost = 0.0;
  for (const auto& p : prods) {
    if (p.university != university || !in_scope(p.sds)) continue;
    auto it = means.find(p.sds);
    const double mean = it == means.end() ? 0.0 : it->second;
    if (!(mean > 0.0)) {
      out.singular_sds.push_back(p.sds);
      continue;
    }
    out.components.push_back({p.sds, p.p_s, mean, p.total_cost, 0.0});
    total_cost += p.total_cost;
  }
  for (auto& c : out.components) {
    c.weight = c.cost / total_cost;
    out.value += (c.productivity / c.national_mean) * c.weight;
  }
  return out;
}

}  // namespace

WeightedProductivity uda_productivity(std::string_view university, std::string_view uda,
                                      const Taxonomy& taxonomy,
                                      std::span<const SdsProductivity> prods,
                                      const std::map<std::string, double>& means) {
  if (!taxonomy.find_uda(uda)) throw ValidationError(fmt::format("unknown UDA '{}'", uda));
  return weighted_productivity(university, std::string(uda), prods, means,
                               [&](const std::string& sds) {
                                 const Sds* s = taxonomy.find_sds(sds);
                                 return s && s->uda == uda;
                               });
}

WeightedProductivity university_productivity(std::string_view university,
                                             std::span<const SdsProductivity> prods,
                                             const std::map<std::string, double>& means) {
  return weighted_productivity(university, std::string(), prods, means,
                               [](const std::string&) { return true; });
}

// ---------------------------------------------------------------------------
// Rankings

std::vector<RankingRow> rank_universities(std::vector<std::pair<std::string, double>> values) {
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<double> raw;
  raw.reserve(values.size());
  for (const auto& v : values) raw.push_back(v.second);
  const auto pct = midrank_percentiles(raw);

  std::vector<RankingRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t rank =
        (i > 0 && values[i].second == values[i - 1].second) ? rows.back().rank : i + 1;
    rows.push_back({values[i].first, values[i].second, rank, values.size(), pct[i]});
  }
  return rows;
}

std::string rank_display(std::size_t rank, std::size_t n_active) {
  return fmt::format("{} out of {}", rank, n_active);
}

NationalRankings compute_rankings(std::vector<SdsProductivity> prods, const Taxonomy& taxonomy,
                                  MeanMode mode) {
  NationalRankings out;
  out.sds_productivity = std::move(prods);
  out.sds_means = national_sds_means(out.sds_productivity, mode);

  std::map<std::string, std::vector<std::pair<std::string, double>>> per_sds;
  std::set<std::string> universities;
  std::map<std::string, std::set<std::string>> udas_of_university;
  for (const auto& p : out.sds_productivity) {
    per_sds[p.sds].emplace_back(p.university, p.p_s);
    universities.insert(p.university);
    if (const Sds* s = taxonomy.find_sds(p.sds)) udas_of_university[p.university].insert(s->uda);
  }
  for (auto& [sds, values] : per_sds) out.by_sds.emplace(sds, rank_universities(std::move(values)));

  for (const auto& [sds, mean] : out.sds_means) {
    if (!(mean > 0.0)) {
      out.diagnostics.push_back(
          fmt::format("SDS '{}' has a zero national mean; dropped from UDA and overall sums", sds));
    }
  }

  std::map<std::string, std::vector<std::pair<std::string, double>>> per_uda;
  std::vector<std::pair<std::string, double>> overall;
  for (const auto& university : universities) {
    for (const auto& uda : udas_of_university[university]) {
      auto w = uda_productivity(university, uda, taxonomy, out.sds_productivity, out.sds_means);
      if (w.defined()) per_uda[uda].emplace_back(university, w.value);
    }
    auto w = university_productivity(university, out.sds_productivity, out.sds_means);
    if (w.defined()) {
      overall.emplace_back(university, w.value);
    } else {
      out.diagnostics.push_back(
          fmt::format("university '{}' has no SDS with a non-zero national mean", university));
    }
    out.university_detail.emplace(university, std::move(w));
  }
  for (auto& [uda, values] : per_uda) out.by_uda.emplace(uda, rank_universities(std::move(values)));
  out.overall = rank_universities(std::move(overall));
  return out;
}

NationalRankings compute_rankings(const ScoreTable& scores, const Taxonomy& taxonomy,
                                  const CostTable& costs, MeanMode mode) {
  return compute_rankings(all_sds_productivities(scores, costs), taxonomy, mode);
}

namespace {

std::vector<std::string> ranking_fields(const RankingRow& row) {
  return {row.university, fmt::format("{}", row.value), std::to_string(row.rank),
          std::to_string(row.n_active), fmt::format("{:.1f}", row.percentile)};
}

void write_keyed(const std::map<std::string, std::vector<RankingRow>>& groups,
                 std::string_view key_name, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({std::string(key_name), "university", "value", "rank", "n_active", "percentile"});
  for (const auto& [key, rows] : groups) {
    for (const auto& row : rows) {
      auto fields = ranking_fields(row);
      fields.insert(fields.begin(), key);
      csv.row(fields);
    }
  }
}

}  // namespace

void write_sds_ranking_csv(const NationalRankings& rankings, std::ostream& out) {
  write_keyed(rankings.by_sds, "sds", out);
}

void write_uda_ranking_csv(const NationalRankings& rankings, std::ostream& out) {
  write_keyed(rankings.by_uda, "uda", out);
}

void write_university_ranking_csv(const NationalRankings& rankings, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"university", "value", "rank", "n_active", "percentile"});
  for (const auto& row : rankings.overall) csv.row(ranking_fields(row));
}

}  // namespace budding
