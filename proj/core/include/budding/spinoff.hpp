#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "budding/aggregate.hpp"
#include "budding/corpus.hpp"
#include "budding/score.hpp"

namespace budding {

// ---------------------------------------------------------------------------
// Sizing
// ---------------------------------------------------------------------------

enum class RatioBasis { Headcount, CostEquivalent };

// Replace the template's faculty in `uda` with `source_university`'s faculty
// there, scaled by `ratio`. Without an explicit ratio the template-to-source
// size ratio over the plan's other UDAs is used.
struct RescaleRule {
  std::string uda;
  std::string source_university;
  std::optional<double> ratio;
  RatioBasis basis = RatioBasis::Headcount;
};

struct AppliedRescale {
  RescaleRule rule;
  double ratio = 0.0;
  int source_total = 0;
  int target_total = 0;
};

struct SizingPlan {
  std::string template_university;
  std::map<std::string, int> targets;  // sds -> faculty count (> 0)
  std::vector<AppliedRescale> rescales;

  int total() const;
};

struct PlanOptions {
  // UDAs the spin-off covers. Empty: every UDA the template is active in plus
  // the UDAs named by rescale rules.
  std::vector<std::string> udas;
  std::vector<RescaleRule> rescales;
};

// Throws ValidationError for an unknown template or source university, an
// unknown UDA, or a rescaled UDA in which the source has no faculty.
SizingPlan build_sizing_plan(const Corpus& corpus, std::string_view template_university,
                             const PlanOptions& options = {}, const CostTable& costs = {});

// Scales integer counts by `ratio` and rounds them to the rounded scaled total
// by largest remainder. Remainder ties go to the larger source count, then to
// the smaller key.
std::map<std::string, int> largest_remainder(const std::map<std::string, int>& counts,
                                             double ratio);

// sds_code,target_count
void write_plan_csv(const SizingPlan& plan, std::ostream& out);
SizingPlan read_plan_csv(const std::filesystem::path& path, const Taxonomy& taxonomy);

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

struct SelectedResearcher {
  std::string researcher_id;
  std::string parent_university;
  double p_r = 0.0;
  double percentile = 0.0;
};

struct SdsSelection {
  std::string sds;
  int target = 0;
  std::size_t candidates = 0;
  // Best first: P_R descending, then researcher id ascending.
  std::vector<SelectedResearcher> selected;

  int shortfall() const { return target - static_cast<int>(selected.size()); }
};

struct SelectionResult {
  std::string spinoff_name;
  std::vector<SdsSelection> by_sds;  // sorted by sds code

  std::size_t total_selected() const;
  int total_target() const;
  int total_shortfall() const;
};

// Per SDS, the top `target` researchers by P_R among the parents' faculty,
// pooled across academic ranks.
SelectionResult select_spinoff_faculty(const SizingPlan& plan,
                                       std::span<const std::string> parents,
                                       const ScoreTable& scores,
                                       std::string spinoff_name = "Spin-off");

// sds_code,researcher_id,parent_university,p_r,percentile
void write_selection_csv(const SelectionResult& selection, std::ostream& out);
// Targets are set to the selected counts.
SelectionResult read_selection_csv(const std::filesystem::path& path, std::string spinoff_name);

// Moves selected researchers to the spin-off as a new university; everyone
// else keeps their row. Percentiles are untouched.
ScoreTable with_spinoff(const ScoreTable& scores, const SelectionResult& selection);

// ---------------------------------------------------------------------------
// Composition and performance reports
// ---------------------------------------------------------------------------

struct RankCounts {
  std::array<std::size_t, 3> counts{};  // indexed by RankLevel

  std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
  double share(RankLevel level) const;
  std::size_t& operator[](RankLevel level) { return counts[static_cast<std::size_t>(level)]; }
  std::size_t operator[](RankLevel level) const { return counts[static_cast<std::size_t>(level)]; }
};

// Rank mix of the corpus researchers, optionally restricted to some UDAs.
RankCounts national_rank_counts(const Corpus& corpus, std::span<const std::string> udas = {});

struct RankMixRow {
  std::string uda;
  RankCounts counts;
};

struct RankMixReport {
  std::vector<RankMixRow> by_uda;
  RankCounts total;
  RankCounts national;
  // Spin-off share minus national share, percentage points, unrounded.
  std::array<double, 3> delta_points{};
  // Difference of the one-decimal displayed shares, as printed in tables.
  std::array<double, 3> displayed_delta_points{};
};

// Researchers are resolved through `corpus` for their rank and UDA.
RankMixReport rank_mix_report(const SelectionResult& selection, const Corpus& corpus,
                              const RankCounts& national);

struct ContributionCell {
  std::size_t selected = 0;
  std::size_t pool = 0;
  double share = 0.0;
  // Parent's share of the selected divided by its share of the parents'
  // combined faculty; 0 when it contributes nobody.
  double concentration = 0.0;
};

struct ContributionRow {
  std::string uda;  // empty for the total row
  std::size_t selected = 0;
  std::vector<ContributionCell> cells;  // aligned with ContributionReport::parents
};

struct ContributionReport {
  std::vector<std::string> parents;
  std::vector<ContributionRow> by_uda;  // UDAs with at least one selected researcher
  ContributionRow total;
};

ContributionReport contribution_report(const SelectionResult& selection, const Corpus& corpus,
                                       std::span<const std::string> parents);

// Percentile classes, best first; the first is "= 100", the rest ">= value".
inline constexpr std::array<double, 7> kPercentileClasses = {100, 99, 98, 95, 90, 80, 50};

struct PerformanceSummary {
  std::string label;
  std::size_t n = 0;
  double mean_percentile = 0.0;
  double share_at_least_80 = 0.0;
  double share_at_least_90 = 0.0;
};

struct ClassDistribution {
  std::string label;
  std::size_t n = 0;
  std::array<std::size_t, kPercentileClasses.size()> counts{};

  double share(std::size_t cls) const;
};

struct PerformanceReport {
  std::vector<PerformanceSummary> spinoff_by_uda;
  PerformanceSummary spinoff_total;
  // One per parent, then one per comparison university.
  std::vector<PerformanceSummary> comparisons;
  // Spin-off, parents pooled, national, then each parent and comparison.
  std::vector<ClassDistribution> classes;
};

PerformanceSummary summarize_percentiles(std::string label, std::span<const double> percentiles);
ClassDistribution classify_percentiles(std::string label, std::span<const double> percentiles);

// Spin-off figures use the percentiles recorded in the selection. Parent,
// comparison and national figures use `scores` (pre-selection), restricted to
// the SDSs covered by the selection.
PerformanceReport performance_report(const SelectionResult& selection, const Corpus& corpus,
                                     const ScoreTable& scores,
                                     std::span<const std::string> parents,
                                     std::span<const std::string> comparisons = {});

}  // namespace budding
