#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "budding/error.hpp"
#include "budding/report.hpp"
#include "budding/score.hpp"
#include "budding/spinoff.hpp"
#include "spinoff_fixtures.hpp"
#include "scratch_dir.hpp"

using namespace budding;

namespace {

Taxonomy taxonomy() {
  Taxonomy t;
  t.add_sds("A/01", "A", "Area A");
  t.add_sds("A/02", "A", "Area A");
  t.add_sds("B/01", "B", "Area B");
  t.add_sds("B/02", "B", "Area B");
  t.add_sds("C/01", "C", "Area C");
  return t;
}

// Researchers per (university, sds), all full confirmed professors.
Corpus staffed(const std::vector<std::tuple<std::string, std::string, int>>& cells) {
  std::vector<Researcher> people;
  for (const auto& [uni, sds, n] : cells) {
    for (int i = 0; i < n; ++i) {
      people.push_back({uni + "-" + sds + "-" + std::to_string(i), uni, sds, {RankLevel::Full, true}});
    }
  }
  return Corpus::build(taxonomy(), std::move(people), {}, YearWindow{2004, 2008});
}

ScoreRow score(std::string id, std::string uni, std::string sds, double p_r,
               RankLevel level = RankLevel::Full) {
  ScoreRow r;
  r.researcher_id = std::move(id);
  r.university = std::move(uni);
  r.sds = std::move(sds);
  r.rank = {level, true};
  r.p_r = p_r;
  return r;
}

SizingPlan plan_of(std::map<std::string, int> targets) {
  SizingPlan p;
  p.template_university = "T";
  p.targets = std::move(targets);
  return p;
}

}  // namespace

TEST(SizingPlan, TemplateIdentity) {
  const Corpus c = staffed({{"T", "A/01", 3}, {"T", "B/01", 1}, {"S", "A/01", 5}});
  const auto plan = build_sizing_plan(c, "T");
  EXPECT_EQ(plan.targets, (std::map<std::string, int>{{"A/01", 3}, {"B/01", 1}}));
  EXPECT_EQ(plan.total(), 4);
}

TEST(SizingPlan, LargestRemainderHalfTiesGoToLargerSource) {
  const std::map<std::string, int> counts = {{"x", 9}, {"y", 7}, {"z", 2}};
  EXPECT_EQ(largest_remainder(counts, 0.5), (std::map<std::string, int>{{"x", 5}, {"y", 3}, {"z", 1}}));
}

TEST(SizingPlan, LargestRemainderEqualCountsBreakByKey) {
  const std::map<std::string, int> counts = {{"b", 1}, {"a", 1}, {"c", 1}};
  EXPECT_EQ(largest_remainder(counts, 0.5), (std::map<std::string, int>{{"a", 1}, {"b", 1}, {"c", 0}}));
}

TEST(SizingPlan, RescaleWithDefaultHeadcountRatio) {
  // Template has 6 in A, source has 12 in A: ratio 0.5 applied to the
  // source's 7 + 3 in B gives 3.5 + 1.5 = 5.
  const Corpus c = staffed({{"T", "A/01", 4}, {"T", "A/02", 2}, {"T", "B/01", 1},
                            {"S", "A/01", 12}, {"S", "B/01", 7}, {"S", "B/02", 3}});
  PlanOptions options;
  options.rescales.push_back({"B", "S", std::nullopt, RatioBasis::Headcount});
  const auto plan = build_sizing_plan(c, "T", options);
  ASSERT_EQ(plan.rescales.size(), 1u);
  EXPECT_DOUBLE_EQ(plan.rescales[0].ratio, 0.5);
  EXPECT_EQ(plan.rescales[0].target_total, 5);
  EXPECT_EQ(plan.targets.at("B/01"), 4);
  EXPECT_EQ(plan.targets.at("B/02"), 1);
  EXPECT_EQ(plan.targets.at("A/01"), 4);
  EXPECT_EQ(plan.total(), 11);
}

TEST(SizingPlan, RescaleWithExplicitRatioAndUdaFilter) {
  const Corpus c = staffed({{"T", "A/01", 4}, {"T", "C/01", 9}, {"S", "B/01", 10}});
  PlanOptions options;
  options.udas = {"A", "B"};
  options.rescales.push_back({"B", "S", 0.3, RatioBasis::Headcount});
  const auto plan = build_sizing_plan(c, "T", options);
  EXPECT_EQ(plan.targets, (std::map<std::string, int>{{"A/01", 4}, {"B/01", 3}}));
}

TEST(SizingPlan, CostBasisUsesEquivalents) {
  std::vector<Researcher> people = {{"t1", "T", "A/01", {RankLevel::Full, true}},
                                    {"s1", "S", "A/01", {RankLevel::Assistant, false}},
                                    {"s2", "S", "A/01", {RankLevel::Assistant, false}},
                                    {"s3", "S", "B/01", {RankLevel::Assistant, false}}};
  const Corpus c = Corpus::build(taxonomy(), people, {}, YearWindow{2004, 2008});
  PlanOptions options;
  options.rescales.push_back({"B", "S", std::nullopt, RatioBasis::CostEquivalent});
  const CostTable costs;
  const auto plan = build_sizing_plan(c, "T", options, costs);
  EXPECT_DOUBLE_EQ(plan.rescales[0].ratio, costs.equivalent({RankLevel::Full, true}) / 2.0);
}

TEST(SizingPlan, Errors) {
  const Corpus c = staffed({{"T", "A/01", 2}, {"S", "A/01", 2}});
  EXPECT_THROW(build_sizing_plan(c, "NOPE"), ValidationError);
  PlanOptions absent;
  absent.rescales.push_back({"A", "GHOST", std::nullopt, RatioBasis::Headcount});
  EXPECT_THROW(build_sizing_plan(c, "T", absent), ValidationError);
  PlanOptions empty_source;
  empty_source.rescales.push_back({"B", "S", std::nullopt, RatioBasis::Headcount});
  EXPECT_THROW(build_sizing_plan(c, "T", empty_source), ValidationError);
}

TEST(SizingPlan, TemplateFixtureTotals247) {
  const Corpus c = testkit::template_faculty_corpus();
  const auto plan = build_sizing_plan(c, "Template");
  EXPECT_EQ(plan.total(), 247);
  EXPECT_EQ(plan.targets.size(), 64u);
  const auto from_file = read_plan_csv(testkit::fixture_dir() / "template_faculty" / "plan.csv", c.taxonomy());
  EXPECT_EQ(from_file.targets, plan.targets);
}

TEST(SizingPlan, CsvRoundTripAndErrors) {
  const auto plan = plan_of({{"A/01", 2}, {"B/02", 7}});
  testkit::ScratchDir dir;
  {
    std::ofstream out(dir / "plan.csv");
    write_plan_csv(plan, out);
  }
  EXPECT_EQ(read_plan_csv(dir / "plan.csv", taxonomy()).targets, plan.targets);
  dir.write("bad.csv", "sds_code,target_count\nZZ/01,2\nA/01,-1\n");
  try {
    read_plan_csv(dir / "bad.csv", taxonomy());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.issues().size(), 2u);
  }
}

TEST(Selection, TopByScore) {
  const ScoreTable scores({score("a", "P", "A/01", 5), score("b", "P", "A/01", 3),
                           score("c", "Q", "A/01", 1), score("d", "X", "A/01", 9)});
  const std::vector<std::string> parents = {"P", "Q"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 2}}), parents, scores);
  ASSERT_EQ(sel.by_sds.size(), 1u);
  ASSERT_EQ(sel.by_sds[0].selected.size(), 2u);
  EXPECT_EQ(sel.by_sds[0].selected[0].researcher_id, "a");
  EXPECT_EQ(sel.by_sds[0].selected[1].researcher_id, "b");
  EXPECT_EQ(sel.by_sds[0].candidates, 3u);
}

TEST(Selection, ShortfallRecorded) {
  const ScoreTable scores({score("a", "P", "A/01", 5), score("b", "P", "A/01", 3)});
  const std::vector<std::string> parents = {"P"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 3}, {"B/01", 1}}), parents, scores);
  EXPECT_EQ(sel.by_sds[0].shortfall(), 1);
  EXPECT_EQ(sel.by_sds[1].shortfall(), 1);
  EXPECT_EQ(sel.total_selected(), 2u);
  EXPECT_EQ(sel.total_target(), 4);
  EXPECT_EQ(sel.total_shortfall(), 2);
}

TEST(Selection, TiesBreakById) {
  const ScoreTable scores({score("m", "P", "A/01", 2), score("k", "P", "A/01", 2),
                           score("z", "P", "A/01", 2)});
  const std::vector<std::string> parents = {"P"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 2}}), parents, scores);
  EXPECT_EQ(sel.by_sds[0].selected[0].researcher_id, "k");
  EXPECT_EQ(sel.by_sds[0].selected[1].researcher_id, "m");
}

TEST(Selection, PooledAcrossRanks) {
  const ScoreTable scores({score("a", "P", "A/01", 1, RankLevel::Full),
                           score("b", "P", "A/01", 4, RankLevel::Assistant),
                           score("c", "P", "A/01", 3, RankLevel::Assistant)});
  const std::vector<std::string> parents = {"P"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 2}}), parents, scores);
  EXPECT_EQ(sel.by_sds[0].selected[0].researcher_id, "b");
  EXPECT_EQ(sel.by_sds[0].selected[1].researcher_id, "c");
}

TEST(Selection, MissingParentIsAnError) {
  const ScoreTable scores({score("a", "P", "A/01", 1)});
  const std::vector<std::string> parents = {"P", "NOPE"};
  EXPECT_THROW(select_spinoff_faculty(plan_of({{"A/01", 1}}), parents, scores), ValidationError);
  EXPECT_THROW(select_spinoff_faculty(plan_of({{"A/01", 1}}), {}, scores), ValidationError);
}

TEST(Selection, WithSpinoffMovesSelected) {
  ScoreTable scores({score("a", "P", "A/01", 5), score("b", "P", "A/01", 3)});
  const std::vector<std::string> parents = {"P"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 1}}), parents, scores, "New");
  const ScoreTable after = with_spinoff(scores, sel);
  EXPECT_EQ(after.find("a")->university, "New");
  EXPECT_EQ(after.find("b")->university, "P");
  EXPECT_EQ(after.find("a")->percentile, scores.find("a")->percentile);
}

TEST(Selection, CsvRoundTrip) {
  ScoreTable scores({score("a", "P", "A/01", 5), score("b", "Q", "B/01", 0.125)});
  const std::vector<std::string> parents = {"P", "Q"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 1}, {"B/01", 2}}), parents, scores);
  testkit::ScratchDir dir;
  {
    std::ofstream out(dir / "selection.csv");
    write_selection_csv(sel, out);
  }
  const auto back = read_selection_csv(dir / "selection.csv", "Spin-off");
  ASSERT_EQ(back.by_sds.size(), 2u);
  EXPECT_EQ(back.total_selected(), 2u);
  EXPECT_EQ(back.by_sds[1].selected[0].p_r, 0.125);
  EXPECT_EQ(back.by_sds[1].selected[0].parent_university, "Q");
}

TEST(RankMix, PrintedSharesAndDeltas) {
  const auto f = testkit::rsu_fixture();
  const auto mix = rank_mix_report(f.selection, f.corpus, f.national);
  EXPECT_EQ(mix.total.counts, (std::array<std::size_t, 3>{87, 88, 72}));
  EXPECT_EQ(percent1(mix.total.share(RankLevel::Full)), "35.2%");
  EXPECT_EQ(percent1(mix.total.share(RankLevel::Associate)), "35.6%");
  EXPECT_EQ(percent1(mix.total.share(RankLevel::Assistant)), "29.1%");
  EXPECT_EQ(percent1(mix.national.share(RankLevel::Full)), "33.6%");
  EXPECT_EQ(percent1(mix.national.share(RankLevel::Associate)), "33.5%");
  EXPECT_EQ(percent1(mix.national.share(RankLevel::Assistant)), "32.9%");
  EXPECT_EQ(signed_points(mix.displayed_delta_points[0]), "+1.6%");
  EXPECT_EQ(signed_points(mix.displayed_delta_points[1]), "+2.1%");
  EXPECT_EQ(signed_points(mix.displayed_delta_points[2]), "-3.8%");
  // The unrounded assistant difference is -3.71 points.
  EXPECT_NEAR(mix.delta_points[2], -3.71, 0.01);
  ASSERT_EQ(mix.by_uda.size(), 5u);
  for (const auto& row : mix.by_uda) {
    for (const auto& uda : testkit::rsu_composition()) {
      if (uda.code != row.uda) continue;
      for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(row.counts.counts[r], static_cast<std::size_t>(uda.by_rank[r]));
    }
  }
}

TEST(RankMix, SingleRank) {
  const Corpus c = staffed({{"P", "A/01", 2}});
  const std::vector<std::string> parents = {"P"};
  const ScoreTable real({score("P-A/01-0", "P", "A/01", 5), score("P-A/01-1", "P", "A/01", 3)});
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 2}}), parents, real);
  const auto mix = rank_mix_report(sel, c, national_rank_counts(c));
  EXPECT_EQ(mix.total.share(RankLevel::Full), 1.0);
  EXPECT_EQ(mix.total.share(RankLevel::Associate), 0.0);
  EXPECT_EQ(mix.total.share(RankLevel::Assistant), 0.0);
}

TEST(Contribution, PrintedSharesAndIndices) {
  const auto f = testkit::rsu_fixture();
  const auto report = contribution_report(f.selection, f.corpus, f.parents);
  ASSERT_EQ(report.by_uda.size(), 5u);
  auto check = [](const ContributionRow& row, const testkit::ContributionRowPrinted& printed) {
    for (std::size_t p = 0; p < 3; ++p) {
      EXPECT_NEAR(100.0 * row.cells[p].share, printed.share_percent[p], 0.051) << row.uda << " " << p;
      EXPECT_NEAR(row.cells[p].concentration, printed.concentration[p], 0.005) << row.uda << " " << p;
    }
  };
  for (std::size_t i = 0; i < 5; ++i) {
    ASSERT_EQ(report.by_uda[i].uda, testkit::printed_contribution()[i].uda);
    check(report.by_uda[i], testkit::printed_contribution()[i]);
  }
  check(report.total, testkit::printed_contribution().back());
  EXPECT_EQ(report.total.cells[0].selected, 135u);
  EXPECT_EQ(report.total.cells[1].selected, 64u);
  EXPECT_EQ(report.total.cells[2].selected, 48u);
}

TEST(Contribution, HandComputedIndices) {
  const Corpus c = staffed({{"P", "A/01", 60}, {"Q", "A/01", 40}});
  SelectionResult sel;
  SdsSelection cell;
  cell.sds = "A/01";
  cell.target = 10;
  for (int i = 0; i < 5; ++i) {
    cell.selected.push_back({"P-A/01-" + std::to_string(i), "P", 1.0, 90});
    cell.selected.push_back({"Q-A/01-" + std::to_string(i), "Q", 1.0, 90});
  }
  sel.by_sds.push_back(cell);
  const std::vector<std::string> parents = {"P", "Q"};
  const auto report = contribution_report(sel, c, parents);
  EXPECT_DOUBLE_EQ(report.by_uda[0].cells[0].share, 0.5);
  EXPECT_NEAR(report.by_uda[0].cells[0].concentration, 0.833, 0.0005);
  EXPECT_DOUBLE_EQ(report.by_uda[0].cells[1].concentration, 1.25);
  // Pool-weighted indices average to one.
  EXPECT_NEAR(0.6 * report.by_uda[0].cells[0].concentration + 0.4 * report.by_uda[0].cells[1].concentration,
              1.0, 1e-12);
}

TEST(Contribution, SingleParent) {
  const Corpus c = staffed({{"P", "A/01", 4}});
  SelectionResult sel;
  sel.by_sds.push_back({"A/01", 1, 4, {{"P-A/01-0", "P", 1.0, 100}}});
  const std::vector<std::string> parents = {"P"};
  const auto report = contribution_report(sel, c, parents);
  EXPECT_EQ(report.total.cells[0].share, 1.0);
  EXPECT_EQ(report.total.cells[0].concentration, 1.0);
}

TEST(Performance, AllAtHundred) {
  const std::vector<double> pct(4, 100.0);
  const auto s = summarize_percentiles("x", pct);
  EXPECT_EQ(s.mean_percentile, 100.0);
  EXPECT_EQ(s.share_at_least_80, 1.0);
  EXPECT_EQ(s.share_at_least_90, 1.0);
}

TEST(Performance, DirectCount) {
  const std::vector<double> pct = {95, 91, 85, 60};
  const auto s = summarize_percentiles("x", pct);
  EXPECT_DOUBLE_EQ(s.mean_percentile, 82.75);
  EXPECT_DOUBLE_EQ(s.share_at_least_80, 0.75);
  EXPECT_DOUBLE_EQ(s.share_at_least_90, 0.5);
}

TEST(Performance, PrintedClasses) {
  const auto f = testkit::rsu_fixture();
  std::vector<double> pct;
  for (const auto& cell : f.selection.by_sds) {
    for (const auto& r : cell.selected) pct.push_back(r.percentile);
  }
  const auto dist = classify_percentiles("RSU", pct);
  EXPECT_EQ(dist.n, 247u);
  const char* printed[] = {"6.9%", "9.7%", "16.2%", "38.1%", "57.5%", "84.2%", "98.8%"};
  for (std::size_t c = 0; c < 7; ++c) {
    EXPECT_EQ(static_cast<int>(dist.counts[c]), testkit::kPrintedClassCumulative[c]);
    EXPECT_EQ(percent1(dist.share(c)), printed[c]);
  }
  EXPECT_EQ(share_of(dist.counts[5], dist.n), "84.2% (208 of 247)");
}

TEST(Performance, ReportUsesSelectionPercentilesAndParentScores) {
  const ScoreTable scores({score("a", "P", "A/01", 5), score("b", "P", "A/01", 3),
                           score("c", "Q", "A/01", 1), score("d", "X", "A/01", 0)});
  std::vector<ScoreRow> rows(scores.rows().begin(), scores.rows().end());
  assign_percentiles(rows);
  const ScoreTable ranked(rows);
  const Corpus c = Corpus::build(taxonomy(),
                                 {{"a", "P", "A/01", {RankLevel::Full, true}},
                                  {"b", "P", "A/01", {RankLevel::Full, true}},
                                  {"c", "Q", "A/01", {RankLevel::Full, true}},
                                  {"d", "X", "A/01", {RankLevel::Full, true}}},
                                 {}, YearWindow{2004, 2008});
  const std::vector<std::string> parents = {"P", "Q"};
  const std::vector<std::string> compare = {"X"};
  const auto sel = select_spinoff_faculty(plan_of({{"A/01", 1}}), parents, ranked);
  const auto report = performance_report(sel, c, ranked, parents, compare);
  EXPECT_EQ(report.spinoff_total.n, 1u);
  EXPECT_EQ(report.spinoff_total.mean_percentile, 100.0);
  ASSERT_EQ(report.comparisons.size(), 3u);
  EXPECT_EQ(report.comparisons[0].label, "Total P");
  EXPECT_DOUBLE_EQ(report.comparisons[0].mean_percentile, (100.0 + 200.0 / 3.0) / 2.0);
  EXPECT_EQ(report.comparisons[2].mean_percentile, 0.0);
  EXPECT_EQ(report.classes.front().label, sel.spinoff_name);
}
