#include "budding/spinoff.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "budding/csv.hpp"
#include "budding/error.hpp"
#include "budding/report.hpp"
#include "records.hpp"

namespace budding {
namespace {

bool contains(std::span<const std::string> items, std::string_view value) {
  return std::find(items.begin(), items.end(), value) != items.end();
}

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

int parse_count(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || value < 0) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

bool better(const SelectedResearcher& a, const SelectedResearcher& b) {
  if (a.p_r != b.p_r) return a.p_r > b.p_r;
  return a.researcher_id < b.researcher_id;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sizing

int SizingPlan::total() const {
  int sum = 0;
  for (const auto& [sds, n] : targets) sum += n;
  return sum;
}

std::map<std::string, int> largest_remainder(const std::map<std::string, int>& counts,
                                             double ratio) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) {
    throw ValidationError(fmt::format("invalid rescale ratio {}", ratio));
  }
  struct Item {
    const std::string* key;
    int count;
    double exact;
    int floor;
  };
  std::vector<Item> items;
  double exact_total = 0.0;
  int floor_total = 0;
  for (const auto& [key, count] : counts) {
    const double exact = static_cast<double>(count) * ratio;
    // Guard against 4.9999999 style representation error before flooring.
    const int fl = static_cast<int>(std::floor(exact + 1e-9));
    items.push_back({&key, count, exact, fl});
    exact_total += exact;
    floor_total += fl;
  }
  const int total = static_cast<int>(std::llround(exact_total));
  int remaining = total - floor_total;

  constexpr double kTieEps = 1e-9;
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = items[a].exact - items[a].floor;
    const double rb = items[b].exact - items[b].floor;
    if (std::abs(ra - rb) > kTieEps) return ra > rb;
    if (items[a].count != items[b].count) return items[a].count > items[b].count;
    return *items[a].key < *items[b].key;
  });

  std::map<std::string, int> out;
  for (const auto& item : items) out[*item.key] = item.floor;
  for (std::size_t k = 0; remaining > 0 && k < order.size(); ++k, --remaining) {
    ++out[*items[order[k]].key];
  }
  return out;
}

SizingPlan build_sizing_plan(const Corpus& corpus, std::string_view template_university,
                             const PlanOptions& options, const CostTable& costs) {
  const Taxonomy& taxonomy = corpus.taxonomy();
  const auto universities = corpus.universities();
  std::vector<std::string> issues;

  if (!contains(universities, template_university)) {
    issues.push_back(fmt::format("template university '{}' not found", template_university));
  }
  std::set<std::string> rule_udas;
  for (const auto& rule : options.rescales) {
    if (!taxonomy.find_uda(rule.uda)) {
      issues.push_back(fmt::format("rescale rule names unknown UDA '{}'", rule.uda));
    }
    if (!contains(universities, rule.source_university)) {
      issues.push_back(fmt::format("rescale source university '{}' not found",
                                   rule.source_university));
    }
    if (!rule_udas.insert(rule.uda).second) {
      issues.push_back(fmt::format("UDA '{}' rescaled more than once", rule.uda));
    }
  }
  for (const auto& uda : options.udas) {
    if (!taxonomy.find_uda(uda)) issues.push_back(fmt::format("unknown UDA '{}'", uda));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  auto headcount = [&](std::string_view university) {
    std::map<std::string, int> counts;
    for (const auto& r : corpus.researchers()) {
      if (r.university == university) ++counts[r.sds];
    }
    return counts;
  };
  auto size_in = [&](std::string_view university, const std::set<std::string>& udas,
                     RatioBasis basis) {
    double size = 0.0;
    for (const auto& r : corpus.researchers()) {
      if (r.university != university || !udas.contains(taxonomy.uda_of(r.sds))) continue;
      size += basis == RatioBasis::Headcount ? 1.0 : costs.equivalent(r.rank);
    }
    return size;
  };

  const auto template_counts = headcount(template_university);
  std::set<std::string> udas(options.udas.begin(), options.udas.end());
  if (udas.empty()) {
    for (const auto& [sds, n] : template_counts) udas.insert(taxonomy.uda_of(sds));
    udas.insert(rule_udas.begin(), rule_udas.end());
  }
  std::set<std::string> kept_udas;
  for (const auto& uda : udas) {
    if (!rule_udas.contains(uda)) kept_udas.insert(uda);
  }

  SizingPlan plan;
  plan.template_university = std::string(template_university);
  for (const auto& [sds, n] : template_counts) {
    if (n > 0 && kept_udas.contains(taxonomy.uda_of(sds))) plan.targets[sds] = n;
  }

  for (const auto& rule : options.rescales) {
    std::map<std::string, int> source_counts;
    for (const auto& [sds, n] : headcount(rule.source_university)) {
      if (taxonomy.uda_of(sds) == rule.uda) source_counts[sds] = n;
    }
    int source_total = 0;
    for (const auto& [sds, n] : source_counts) source_total += n;
    if (source_total == 0) {
      throw ValidationError(fmt::format("source university '{}' has no faculty in UDA '{}'",
                                        rule.source_university, rule.uda));
    }

    double ratio = 0.0;
    if (rule.ratio) {
      ratio = *rule.ratio;
    } else {
      const double source_size = size_in(rule.source_university, kept_udas, rule.basis);
      if (!(source_size > 0.0)) {
        throw ValidationError(fmt::format(
            "cannot derive a ratio for UDA '{}': '{}' has no faculty in the other UDAs", rule.uda,
            rule.source_university));
      }
      ratio = size_in(template_university, kept_udas, rule.basis) / source_size;
    }

    const auto scaled = largest_remainder(source_counts, ratio);
    int target_total = 0;
    for (const auto& [sds, n] : scaled) {
      if (n > 0) plan.targets[sds] = n;
      target_total += n;
    }
    plan.rescales.push_back({rule, ratio, source_total, target_total});
  }
  return plan;
}

void write_plan_csv(const SizingPlan& plan, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"sds_code", "target_count"});
  for (const auto& [sds, n] : plan.targets) csv.row({sds, std::to_string(n)});
}

SizingPlan read_plan_csv(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  static constexpr std::string_view kFields[] = {"sds_code", "target_count"};
  auto set = detail::read_records(path, kFields);
  SizingPlan plan;
  std::vector<std::string> issues;
  for (const auto& rec : set.records) {
    try {
      if (!taxonomy.find_sds(rec.values[0])) {
        throw ValidationError(fmt::format("unknown SDS '{}'", rec.values[0]));
      }
      const int n = parse_count(rec.values[1], "target_count");
      if (plan.targets.contains(rec.values[0])) {
        throw ValidationError(fmt::format("SDS '{}' listed twice", rec.values[0]));
      }
      if (n > 0) plan.targets[rec.values[0]] = n;
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return plan;
}

// ---------------------------------------------------------------------------
// Selection

std::size_t SelectionResult::total_selected() const {
  std::size_t n = 0;
  for (const auto& s : by_sds) n += s.selected.size();
  return n;
}

int SelectionResult::total_target() const {
  int n = 0;
  for (const auto& s : by_sds) n += s.target;
  return n;
}

int SelectionResult::total_shortfall() const {
  int n = 0;
  for (const auto& s : by_sds) n += s.shortfall();
  return n;
}

SelectionResult select_spinoff_faculty(const SizingPlan& plan,
                                       std::span<const std::string> parents,
                                       const ScoreTable& scores, std::string spinoff_name) {
  if (parents.empty()) throw ValidationError("no parent universities given");
  {
    std::vector<std::string> missing;
    for (const auto& parent : parents) {
      const bool found = std::any_of(scores.rows().begin(), scores.rows().end(),
                                     [&](const ScoreRow& r) { return r.university == parent; });
      if (!found) missing.push_back(fmt::format("parent university '{}' not found", parent));
    }
    if (!missing.empty()) throw ValidationError(std::move(missing));
  }

  std::unordered_map<std::string_view, std::vector<SelectedResearcher>> pools;
  for (const auto& row : scores.rows()) {
    if (!plan.targets.contains(row.sds) || !contains(parents, row.university)) continue;
    pools[row.sds].push_back({row.researcher_id, row.university, row.p_r, row.percentile});
  }

  SelectionResult result;
  result.spinoff_name = std::move(spinoff_name);
  for (const auto& [sds, target] : plan.targets) {
    SdsSelection s;
    s.sds = sds;
    s.target = target;
    auto it = pools.find(sds);
    if (it != pools.end()) {
      auto& pool = it->second;
      s.candidates = pool.size();
      const std::size_t take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(target));
      std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                        better);
      s.selected.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    }
    result.by_sds.push_back(std::move(s));
  }
  return result;
}

void write_selection_csv(const SelectionResult& selection, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"sds_code", "researcher_id", "parent_university", "p_r", "percentile"});
  for (const auto& s : selection.by_sds) {
    for (const auto& r : s.selected) {
      csv.row({s.sds, r.researcher_id, r.parent_university, fmt::format("{}", r.p_r),
               fmt::format("{:.1f}", r.percentile)});
    }
  }
}

SelectionResult read_selection_csv(const std::filesystem::path& path, std::string spinoff_name) {
  static constexpr std::string_view kFields[] = {"sds_code", "researcher_id", "parent_university",
                                                 "p_r", "percentile"};
  auto set = detail::read_records(path, kFields);
  std::map<std::string, SdsSelection> by_sds;
  std::unordered_set<std::string> seen;
  std::vector<std::string> issues;
  for (const auto& rec : set.records) {
    try {
      SelectedResearcher r{rec.values[1], rec.values[2], parse_double(rec.values[3], "p_r"),
                           parse_double(rec.values[4], "percentile")};
      if (r.percentile < 0.0 || r.percentile > 100.0) {
        throw ValidationError(fmt::format("percentile {} outside [0, 100]", r.percentile));
      }
      if (!seen.insert(r.researcher_id).second) {
        throw ValidationError(fmt::format("researcher '{}' selected twice", r.researcher_id));
      }
      auto& s = by_sds[rec.values[0]];
      s.sds = rec.values[0];
      s.selected.push_back(std::move(r));
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  SelectionResult result;
  result.spinoff_name = std::move(spinoff_name);
  for (auto& [sds, s] : by_sds) {
    std::sort(s.selected.begin(), s.selected.end(), better);
    s.target = static_cast<int>(s.selected.size());
    s.candidates = s.selected.size();
    result.by_sds.push_back(std::move(s));
  }
  return result;
}

ScoreTable with_spinoff(const ScoreTable& scores, const SelectionResult& selection) {
  for (const auto& row : scores.rows()) {
    if (row.university == selection.spinoff_name) {
      throw ValidationError(fmt::format("spin-off name '{}' is already a university",
                                        selection.spinoff_name));
    }
  }
  std::unordered_set<std::string_view> moved;
  for (const auto& s : selection.by_sds) {
    for (const auto& r : s.selected) moved.insert(r.researcher_id);
  }
  std::vector<ScoreRow> rows(scores.rows().begin(), scores.rows().end());
  for (auto& row : rows) {
    if (moved.contains(row.researcher_id)) row.university = selection.spinoff_name;
  }
  return ScoreTable(std::move(rows));
}

// ---------------------------------------------------------------------------
// Reports

double RankCounts::share(RankLevel level) const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : static_cast<double>((*this)[level]) / static_cast<double>(n);
}

RankCounts national_rank_counts(const Corpus& corpus, std::span<const std::string> udas) {
  RankCounts counts;
  for (const auto& r : corpus.researchers()) {
    if (!udas.empty() && !contains(udas, corpus.taxonomy().uda_of(r.sds))) continue;
    ++counts[r.rank.level];
  }
  return counts;
}

namespace {

const Researcher& resolve(const Corpus& corpus, const SelectedResearcher& r) {
  const Researcher* found = corpus.find_researcher(r.researcher_id);
  if (!found) {
    throw ValidationError(fmt::format("selected researcher '{}' is not in the corpus",
                                      r.researcher_id));
  }
  return *found;
}

}  // namespace

RankMixReport rank_mix_report(const SelectionResult& selection, const Corpus& corpus,
                              const RankCounts& national) {
  std::map<std::string, RankCounts> per_uda;
  RankMixReport report;
  for (const auto& s : selection.by_sds) {
    const std::string& uda = corpus.taxonomy().uda_of(s.sds);
    for (const auto& r : s.selected) {
      const RankLevel level = resolve(corpus, r).rank.level;
      ++per_uda[uda][level];
      ++report.total[level];
    }
  }
  for (auto& [uda, counts] : per_uda) report.by_uda.push_back({uda, counts});
  report.national = national;
  for (RankLevel level : kRankLevels) {
    const auto i = static_cast<std::size_t>(level);
    const double spin = 100.0 * report.total.share(level);
    const double nat = 100.0 * national.share(level);
    report.delta_points[i] = spin - nat;
    report.displayed_delta_points[i] = round1(round1(spin) - round1(nat));
  }
  return report;
}

ContributionReport contribution_report(const SelectionResult& selection, const Corpus& corpus,
                                       std::span<const std::string> parents) {
  const Taxonomy& taxonomy = corpus.taxonomy();
  ContributionReport report;
  report.parents.assign(parents.begin(), parents.end());

  std::map<std::string, std::vector<std::size_t>> selected;  // uda -> per parent
  for (const auto& s : selection.by_sds) {
    const std::string& uda = taxonomy.uda_of(s.sds);
    for (const auto& r : s.selected) {
      auto it = std::find(parents.begin(), parents.end(), r.parent_university);
      if (it == parents.end()) {
        throw ValidationError(fmt::format("researcher '{}' comes from '{}', which is not a parent",
                                          r.researcher_id, r.parent_university));
      }
      auto& row = selected[uda];
      row.resize(parents.size());
      ++row[static_cast<std::size_t>(it - parents.begin())];
    }
  }

  std::map<std::string, std::vector<std::size_t>> pools;
  for (const auto& r : corpus.researchers()) {
    auto it = std::find(parents.begin(), parents.end(), r.university);
    if (it == parents.end()) continue;
    const std::string& uda = taxonomy.uda_of(r.sds);
    if (!selected.contains(uda)) continue;
    auto& row = pools[uda];
    row.resize(parents.size());
    ++row[static_cast<std::size_t>(it - parents.begin())];
  }

  auto make_row = [&](std::string uda, const std::vector<std::size_t>& sel,
                      std::vector<std::size_t> pool) {
    pool.resize(parents.size());
    ContributionRow row;
    row.uda = std::move(uda);
    row.selected = std::accumulate(sel.begin(), sel.end(), std::size_t{0});
    const auto pool_total = std::accumulate(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t j = 0; j < parents.size(); ++j) {
      ContributionCell cell;
      cell.selected = sel[j];
      cell.pool = pool[j];
      cell.share = static_cast<double>(sel[j]) / static_cast<double>(row.selected);
      if (sel[j] > 0) {
        if (pool[j] == 0) {
          throw ValidationError(fmt::format("'{}' contributes to UDA '{}' but has no faculty there",
                                            parents[j], row.uda));
        }
        const double pool_share = static_cast<double>(pool[j]) / static_cast<double>(pool_total);
        cell.concentration = cell.share / pool_share;
      }
      row.cells.push_back(cell);
    }
    return row;
  };

  std::vector<std::size_t> total_sel(parents.size());
  std::vector<std::size_t> total_pool(parents.size());
  for (const auto& [uda, sel] : selected) {
    auto& pool = pools[uda];
    pool.resize(parents.size());
    report.by_uda.push_back(make_row(uda, sel, pool));
    for (std::size_t j = 0; j < parents.size(); ++j) {
      total_sel[j] += sel[j];
      total_pool[j] += pool[j];
    }
  }
  if (!report.by_uda.empty()) report.total = make_row("", total_sel, total_pool);
  return report;
}

double ClassDistribution::share(std::size_t cls) const {
  return n == 0 ? 0.0 : static_cast<double>(counts[cls]) / static_cast<double>(n);
}

PerformanceSummary summarize_percentiles(std::string label, std::span<const double> percentiles) {
  PerformanceSummary out;
  out.label = std::move(label);
  out.n = percentiles.size();
  if (percentiles.empty()) return out;
  double sum = 0.0;
  std::size_t at80 = 0;
  std::size_t at90 = 0;
  for (double p : percentiles) {
    sum += p;
    if (p >= 80.0) ++at80;
    if (p >= 90.0) ++at90;
  }
  const double n = static_cast<double>(out.n);
  out.mean_percentile = sum / n;
  out.share_at_least_80 = static_cast<double>(at80) / n;
  out.share_at_least_90 = static_cast<double>(at90) / n;
  return out;
}

ClassDistribution classify_percentiles(std::string label, std::span<const double> percentiles) {
  ClassDistribution out;
  out.label = std::move(label);
  out.n = percentiles.size();
  for (double p : percentiles) {
    if (p == 100.0) ++out.counts[0];
    for (std::size_t c = 1; c < kPercentileClasses.size(); ++c) {
      if (p >= kPercentileClasses[c]) ++out.counts[c];
    }
  }
  return out;
}

PerformanceReport performance_report(const SelectionResult& selection, const Corpus& corpus,
                                     const ScoreTable& scores,
                                     std::span<const std::string> parents,
                                     std::span<const std::string> comparisons) {
  const Taxonomy& taxonomy = corpus.taxonomy();
  PerformanceReport report;

  std::set<std::string_view> covered;
  std::map<std::string, std::vector<double>> by_uda;
  std::vector<double> spin;
  for (const auto& s : selection.by_sds) {
    covered.insert(s.sds);
    for (const auto& r : s.selected) {
      by_uda[taxonomy.uda_of(s.sds)].push_back(r.percentile);
      spin.push_back(r.percentile);
    }
  }
  for (const auto& [uda, values] : by_uda) {
    const Uda* u = taxonomy.find_uda(uda);
    report.spinoff_by_uda.push_back(summarize_percentiles(u ? u->name : uda, values));
  }
  report.spinoff_total = summarize_percentiles("Total " + selection.spinoff_name, spin);

  auto percentiles_of = [&](auto&& keep) {
    std::vector<double> out;
    for (const auto& row : scores.rows()) {
      if (covered.contains(row.sds) && keep(row)) out.push_back(row.percentile);
    }
    return out;
  };

  std::vector<std::pair<std::string, std::vector<double>>> groups;
  for (const auto& parent : parents) {
    groups.emplace_back(parent, percentiles_of([&](const ScoreRow& r) { return r.university == parent; }));
  }
  for (const auto& name : comparisons) {
    groups.emplace_back(name, percentiles_of([&](const ScoreRow& r) { return r.university == name; }));
  }
  for (const auto& [name, values] : groups) {
    report.comparisons.push_back(summarize_percentiles("Total " + name, values));
  }

  report.classes.push_back(classify_percentiles(selection.spinoff_name, spin));
  report.classes.push_back(classify_percentiles(
      "Parent universities",
      percentiles_of([&](const ScoreRow& r) { return contains(parents, r.university); })));
  report.classes.push_back(
      classify_percentiles("All universities", percentiles_of([](const ScoreRow&) { return true; })));
  for (const auto& [name, values] : groups) {
    report.classes.push_back(classify_percentiles(name, values));
  }
  return report;
}

}  // namespace budding
