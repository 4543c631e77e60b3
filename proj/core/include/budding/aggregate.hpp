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
#include <utility>
#include <vector>

#include "budding/corpus.hpp"
#include "budding/score.hpp"

namespace budding {

using SalaryTable = std::map<AcademicRank, double>;

// Average yearly cost (k EUR) per academic rank, 2004-2008 national averages.
SalaryTable default_salaries();

// rank_level,confirmed,yearly_cost_keur
SalaryTable read_salaries_csv(const std::filesystem::path& path);

// Yearly cost of each rank and its multiple of the probationary assistant's
// cost. Equivalents are always derived from costs.
class CostTable {
 public:
  CostTable();  // default_salaries()

  double yearly_cost(AcademicRank rank) const { return cost_[rank.index()]; }
  double equivalent(AcademicRank rank) const { return equivalent_[rank.index()]; }

  static constexpr AcademicRank kBaseRank{RankLevel::Assistant, false};

 private:
  friend CostTable cost_equivalents(const SalaryTable& salaries);

  struct Uninitialized {};
  explicit CostTable(Uninitialized) {}

  std::array<double, 6> cost_{};
  std::array<double, 6> equivalent_{};
};

// Throws ValidationError naming any missing rank or non-positive cost.
CostTable cost_equivalents(const SalaryTable& salaries);

// Cost-weighted productivity of one university's staff in one SDS.
struct SdsProductivity {
  std::string university;
  std::string sds;
  double p_s = 0.0;
  double total_pr = 0.0;
  double total_cost = 0.0;
  std::size_t n_staff = 0;
};

// Sum of P_R over sum of cost equivalents. nullopt when the university has no
// staff in the SDS (inactive).
std::optional<SdsProductivity> sds_productivity(std::string_view university, std::string_view sds,
                                                const ScoreTable& scores, const CostTable& costs);

// Every active (university, sds) pair, sorted by sds then university.
std::vector<SdsProductivity> all_sds_productivities(const ScoreTable& scores,
                                                    const CostTable& costs);

// Replaces the entries of `universities` in `current` with their entries from
// `baseline`. Used to hold parent universities at their pre-selection values.
std::vector<SdsProductivity> freeze_universities(std::span<const SdsProductivity> current,
                                                 std::span<const SdsProductivity> baseline,
                                                 std::span<const std::string> universities);

enum class MeanMode {
  // Plain mean of P_S over active universities.
  Unweighted,
  // Mean weighted by each university's cost in the SDS.
  CostWeighted,
};

std::map<std::string, double> national_sds_means(std::span<const SdsProductivity> prods,
                                                 MeanMode mode = MeanMode::Unweighted);

struct WeightedComponent {
  std::string sds;
  double productivity = 0.0;
  double national_mean = 0.0;
  double cost = 0.0;
  double weight = 0.0;
};

// Cost-weighted sum of P_S / national mean over a set of SDSs: one UDA, or
// every SDS a university is active in.
struct WeightedProductivity {
  std::string university;
  std::string scope;  // UDA code, or empty for the whole university
  double value = 0.0;
  std::vector<WeightedComponent> components;
  // Active SDSs dropped because their national mean is zero.
  std::vector<std::string> singular_sds;

  bool defined() const { return !components.empty(); }
  double weight_sum() const;
};

WeightedProductivity uda_productivity(std::string_view university, std::string_view uda,
                                      const Taxonomy& taxonomy,
                                      std::span<const SdsProductivity> prods,
                                      const std::map<std::string, double>& means);

WeightedProductivity university_productivity(std::string_view university,
                                             std::span<const SdsProductivity> prods,
                                             const std::map<std::string, double>& means);

struct RankingRow {
  std::string university;
  double value = 0.0;
  std::size_t rank = 0;      // competition ranking, 1 = best
  std::size_t n_active = 0;
  double percentile = 0.0;   // mid-rank, 100 = best
};

// Sorted by value descending, then university name.
std::vector<RankingRow> rank_universities(std::vector<std::pair<std::string, double>> values);

// "1 out of 54"
std::string rank_display(std::size_t rank, std::size_t n_active);

struct NationalRankings {
  std::vector<SdsProductivity> sds_productivity;
  std::map<std::string, double> sds_means;
  std::map<std::string, std::vector<RankingRow>> by_sds;
  std::map<std::string, std::vector<RankingRow>> by_uda;
  std::vector<RankingRow> overall;
  std::map<std::string, WeightedProductivity> university_detail;
  std::vector<std::string> diagnostics;
};

NationalRankings compute_rankings(std::vector<SdsProductivity> prods, const Taxonomy& taxonomy,
                                  MeanMode mode = MeanMode::Unweighted);

NationalRankings compute_rankings(const ScoreTable& scores, const Taxonomy& taxonomy,
                                  const CostTable& costs, MeanMode mode = MeanMode::Unweighted);

// sds,university,value,rank,n_active,percentile
void write_sds_ranking_csv(const NationalRankings& rankings, std::ostream& out);
// uda,university,value,rank,n_active,percentile
void write_uda_ranking_csv(const NationalRankings& rankings, std::ostream& out);
// university,value,rank,n_active,percentile
void write_university_ranking_csv(const NationalRankings& rankings, std::ostream& out);

}  // namespace budding
