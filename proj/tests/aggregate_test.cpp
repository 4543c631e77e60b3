#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "budding/aggregate.hpp"
#include "budding/error.hpp"
#include "budding/report.hpp"
#include "scratch_dir.hpp"

using namespace budding;

namespace {

constexpr AcademicRank kFullC{RankLevel::Full, true};
constexpr AcademicRank kAsstP{RankLevel::Assistant, false};

ScoreRow row(std::string id, std::string uni, std::string sds, AcademicRank rank, double p_r) {
  ScoreRow r;
  r.researcher_id = std::move(id);
  r.university = std::move(uni);
  r.sds = std::move(sds);
  r.rank = rank;
  r.p_r = p_r;
  return r;
}

SdsProductivity prod(std::string uni, std::string sds, double p_s, double cost) {
  return {std::move(uni), std::move(sds), p_s, p_s * cost, cost, 1};
}

Taxonomy two_udas() {
  Taxonomy t;
  t.add_sds("A/01", "A", "Area A");
  t.add_sds("A/02", "A", "Area A");
  t.add_sds("B/01", "B", "Area B");
  return t;
}

}  // namespace

TEST(CostEquivalents, PrintedEquivalents) {
  const CostTable t = cost_equivalents(default_salaries());
  const std::array<double, 6> printed = {2.783, 2.103, 2.018, 1.525, 1.533, 1.0};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(t.equivalent(kAcademicRanks[i]), printed[i], 0.0005) << describe(kAcademicRanks[i]);
  }
  EXPECT_EQ(t.equivalent(kAsstP), 1.0);
  EXPECT_EQ(t.yearly_cost(kFullC), 124.939);
}

TEST(CostEquivalents, RatioOfCosts) {
  auto s = default_salaries();
  EXPECT_DOUBLE_EQ(cost_equivalents(s).equivalent({RankLevel::Associate, true}), 90.622 / 44.899);
}

TEST(CostEquivalents, Errors) {
  auto missing = default_salaries();
  missing.erase({RankLevel::Associate, false});
  EXPECT_THROW(cost_equivalents(missing), ValidationError);
  auto zero = default_salaries();
  zero[kAsstP] = 0.0;
  EXPECT_THROW(cost_equivalents(zero), ValidationError);
}

TEST(CostEquivalents, SalaryFile) {
  testkit::ScratchDir dir;
  std::string text = "rank_level,confirmed,yearly_cost_keur\n";
  for (AcademicRank r : kAcademicRanks) {
    text += std::string(to_string(r.level)) + "," + (r.confirmed ? "true" : "false") + ",";
    text += r == kAsstP ? "50\n" : "100\n";
  }
  dir.write("salaries.csv", text);
  const CostTable t = cost_equivalents(read_salaries_csv(dir / "salaries.csv"));
  EXPECT_DOUBLE_EQ(t.equivalent(kFullC), 2.0);
  dir.write("bad.csv", "rank_level,confirmed,yearly_cost_keur\nfull,true,abc\n");
  EXPECT_THROW(read_salaries_csv(dir / "bad.csv"), ValidationError);
}

TEST(SdsProductivity, CostWeightedRatio) {
  const ScoreTable t({row("a", "U", "S", kFullC, 2.0), row("b", "U", "S", kAsstP, 1.0)});
  const CostTable costs;
  const auto p = sds_productivity("U", "S", t, costs);
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->p_s, 3.0 / (124.939 / 44.899 + 1.0));
  EXPECT_NEAR(p->p_s, 0.7930, 1e-3);
  EXPECT_EQ(p->n_staff, 2u);
}

TEST(SdsProductivity, BaseRankIsUnitCost) {
  const ScoreTable t({row("a", "U", "S", kAsstP, 1.75)});
  EXPECT_DOUBLE_EQ(sds_productivity("U", "S", t, CostTable{})->p_s, 1.75);
}

TEST(SdsProductivity, CloningStaffLeavesItUnchanged) {
  const ScoreTable t({row("a", "U", "S", kFullC, 2.0), row("b", "U", "S", kAsstP, 1.0)});
  const ScoreTable twice({row("a", "U", "S", kFullC, 2.0), row("b", "U", "S", kAsstP, 1.0),
                          row("a2", "U", "S", kFullC, 2.0), row("b2", "U", "S", kAsstP, 1.0)});
  EXPECT_NEAR(sds_productivity("U", "S", t, CostTable{})->p_s,
              sds_productivity("U", "S", twice, CostTable{})->p_s, 1e-15);
}

TEST(SdsProductivity, InactiveIsNullopt) {
  const ScoreTable t({row("a", "U", "S", kFullC, 2.0)});
  EXPECT_FALSE(sds_productivity("U", "OTHER", t, CostTable{}));
  EXPECT_FALSE(sds_productivity("V", "S", t, CostTable{}));
}

TEST(NationalMeans, Examples) {
  const std::vector<SdsProductivity> one = {prod("U", "S", 0.7, 1)};
  EXPECT_DOUBLE_EQ(national_sds_means(one).at("S"), 0.7);
  const std::vector<SdsProductivity> two = {prod("U", "S", 0.4, 1), prod("V", "S", 0.8, 3)};
  EXPECT_DOUBLE_EQ(national_sds_means(two).at("S"), 0.6);
  EXPECT_DOUBLE_EQ(national_sds_means(two, MeanMode::CostWeighted).at("S"), (0.4 + 2.4) / 4.0);
}

TEST(UdaProductivity, RatiosOfOne) {
  const auto t = two_udas();
  const std::vector<SdsProductivity> prods = {prod("U", "A/01", 0.5, 2), prod("U", "A/02", 2.0, 5)};
  const std::map<std::string, double> means = {{"A/01", 0.5}, {"A/02", 2.0}};
  const auto w = uda_productivity("U", "A", t, prods, means);
  EXPECT_DOUBLE_EQ(w.value, 1.0);
  EXPECT_NEAR(w.weight_sum(), 1.0, 1e-12);
}

TEST(UdaProductivity, RatiosTwoAndZero) {
  const auto t = two_udas();
  const std::vector<SdsProductivity> prods = {prod("U", "A/01", 2.0, 3), prod("U", "A/02", 0.0, 3)};
  const std::map<std::string, double> means = {{"A/01", 1.0}, {"A/02", 0.5}};
  EXPECT_DOUBLE_EQ(uda_productivity("U", "A", t, prods, means).value, 1.0);
}

TEST(UdaProductivity, ZeroMeanSdsIsDropped) {
  const auto t = two_udas();
  const std::vector<SdsProductivity> prods = {prod("U", "A/01", 2.0, 3), prod("U", "A/02", 0.0, 7)};
  const std::map<std::string, double> means = {{"A/01", 1.0}, {"A/02", 0.0}};
  const auto w = uda_productivity("U", "A", t, prods, means);
  EXPECT_DOUBLE_EQ(w.value, 2.0);
  EXPECT_EQ(w.singular_sds, std::vector<std::string>{"A/02"});
  EXPECT_DOUBLE_EQ(w.weight_sum(), 1.0);
  EXPECT_THROW(uda_productivity("U", "NOPE", t, prods, means), ValidationError);
}

TEST(UdaProductivity, PhysicsRankFormat) {
  Taxonomy t;
  t.add_sds("FIS/01", "PHYS", "Physics");
  t.add_sds("FIS/02", "PHYS", "Physics");
  const std::vector<SdsProductivity> prods = {prod("X", "FIS/01", 4.0, 10), prod("X", "FIS/02", 3.1, 10)};
  const std::map<std::string, double> means = {{"FIS/01", 1.0}, {"FIS/02", 1.0}};
  const auto w = uda_productivity("X", "PHYS", t, prods, means);
  std::vector<std::pair<std::string, double>> values = {{"X", w.value}};
  for (int i = 0; i < 61; ++i) values.emplace_back("U" + std::to_string(i), 0.5 + i * 0.04);
  const auto rows = rank_universities(values);
  EXPECT_EQ(rows.front().university, "X");
  EXPECT_NEAR(rows.front().value, 3.55, 1e-12);
  EXPECT_EQ(rank_display(rows.front().rank, rows.front().n_active), "1 out of 62");
}

TEST(UniversityProductivity, SingleSdsCollapses) {
  const std::vector<SdsProductivity> prods = {prod("U", "A/01", 1.2, 4), prod("V", "A/01", 0.4, 1)};
  const auto means = national_sds_means(prods);
  EXPECT_DOUBLE_EQ(university_productivity("U", prods, means).value, 1.2 / 0.8);
  EXPECT_DOUBLE_EQ(uda_productivity("U", "A", two_udas(), prods, means).value, 1.2 / 0.8);
}

TEST(UniversityProductivity, IdenticalUniversitiesTie) {
  std::vector<SdsProductivity> prods;
  for (const char* u : {"U1", "U2", "U3"}) {
    prods.push_back(prod(u, "A/01", 0.9, 2));
    prods.push_back(prod(u, "B/01", 0.3, 5));
  }
  const auto r = compute_rankings(prods, two_udas());
  ASSERT_EQ(r.overall.size(), 3u);
  for (const auto& row : r.overall) {
    EXPECT_DOUBLE_EQ(row.value, 1.0);
    EXPECT_EQ(row.rank, 1u);
    EXPECT_EQ(row.percentile, 50.0);
  }
}

TEST(RankUniversities, DistinctValues) {
  const auto rows = rank_universities({{"b", 2}, {"c", 1}, {"a", 3}});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].university, "a");
  EXPECT_EQ(rows[0].rank, 1u);
  EXPECT_EQ(rows[1].rank, 2u);
  EXPECT_EQ(rows[2].rank, 3u);
  EXPECT_EQ(rows[0].percentile, 100.0);
  EXPECT_EQ(rows[1].percentile, 50.0);
  EXPECT_EQ(rows[2].percentile, 0.0);
}

TEST(RankUniversities, CompetitionRankingForTies) {
  const auto rows = rank_universities({{"x", 2}, {"y", 2}, {"z", 1}});
  EXPECT_EQ(rows[0].rank, 1u);
  EXPECT_EQ(rows[1].rank, 1u);
  EXPECT_EQ(rows[2].rank, 3u);
  EXPECT_EQ(rows[0].percentile, 75.0);
  EXPECT_EQ(rows[1].percentile, 75.0);
}

TEST(RankUniversities, DisplayString) { EXPECT_EQ(rank_display(1, 54), "1 out of 54"); }

// Absolute rank and percentile pairs as printed in the national ranking table.
TEST(RankUniversities, PrintedPercentilePairs) {
  struct Printed {
    std::size_t rank, n;
    const char* percentile;
  };
  const Printed printed[] = {{2, 40, "97.4"}, {1, 50, "100.0"}, {4, 39, "92.1"}, {4, 49, "93.8"},
                             {9, 36, "77.1"}, {8, 35, "79.4"},  {9, 39, "78.9"}, {4, 31, "90.0"},
                             {6, 27, "80.8"}, {5, 39, "89.5"}};
  for (const auto& p : printed) {
    std::vector<std::pair<std::string, double>> values;
    for (std::size_t i = 0; i < p.n; ++i) values.emplace_back("U" + std::to_string(i), 100.0 - i);
    const auto rows = rank_universities(values);
    EXPECT_EQ(rows[p.rank - 1].rank, p.rank);
    EXPECT_EQ(fixed1(rows[p.rank - 1].percentile), p.percentile) << p.rank << " out of " << p.n;
  }
}

TEST(ComputeRankings, ZeroMeanSdsIsReported) {
  std::vector<SdsProductivity> prods = {prod("U", "A/01", 0.0, 1), prod("V", "A/01", 0.0, 1),
                                        prod("U", "B/01", 1.0, 1)};
  const auto r = compute_rankings(prods, two_udas());
  EXPECT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.overall.size(), 1u);  // V has nothing left to rank on
  EXPECT_EQ(r.overall[0].university, "U");
}

TEST(FreezeUniversities, KeepsBaselineForFrozen) {
  const std::vector<SdsProductivity> now = {prod("P", "A/01", 0.1, 1), prod("Q", "A/01", 0.2, 1)};
  const std::vector<SdsProductivity> before = {prod("P", "A/01", 0.9, 1), prod("Q", "A/01", 0.8, 1)};
  const std::vector<std::string> frozen = {"P"};
  const auto out = freeze_universities(now, before, frozen);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].p_s, 0.9);
  EXPECT_EQ(out[1].p_s, 0.2);
}

TEST(RankingCsv, Headers) {
  std::vector<SdsProductivity> prods = {prod("U", "A/01", 1.0, 1), prod("V", "A/01", 3.0, 1)};
  const auto r = compute_rankings(prods, two_udas());
  std::ostringstream sds, uni;
  write_sds_ranking_csv(r, sds);
  write_university_ranking_csv(r, uni);
  EXPECT_EQ(sds.str().substr(0, sds.str().find('\n')), "sds,university,value,rank,n_active,percentile");
  EXPECT_EQ(uni.str(), "university,value,rank,n_active,percentile\nV,1.5,1,2,100.0\nU,0.5,2,2,0.0\n");
}
