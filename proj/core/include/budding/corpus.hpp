#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace budding {

enum class RankLevel : std::uint8_t { Full = 0, Associate = 1, Assistant = 2 };

inline constexpr std::array<RankLevel, 3> kRankLevels = {
    RankLevel::Full, RankLevel::Associate, RankLevel::Assistant};

std::string_view to_string(RankLevel level);

// Accepts "full", "associate", "assistant" in any letter case.
RankLevel parse_rank_level(std::string_view text);

struct AcademicRank {
  RankLevel level = RankLevel::Assistant;
  bool confirmed = false;

  // 0..5, Full/confirmed first and Assistant/probationary last.
  constexpr std::size_t index() const noexcept {
    return static_cast<std::size_t>(level) * 2 + (confirmed ? 0 : 1);
  }

  friend constexpr auto operator<=>(const AcademicRank& a, const AcademicRank& b) noexcept {
    return a.index() <=> b.index();
  }
  friend constexpr bool operator==(const AcademicRank&, const AcademicRank&) = default;
};

inline constexpr std::array<AcademicRank, 6> kAcademicRanks = {{
    {RankLevel::Full, true},
    {RankLevel::Full, false},
    {RankLevel::Associate, true},
    {RankLevel::Associate, false},
    {RankLevel::Assistant, true},
    {RankLevel::Assistant, false},
}};

// Human label, e.g. "Full professor (confirmed)".
std::string describe(AcademicRank rank);

bool parse_bool(std::string_view text);

// University disciplinary area.
struct Uda {
  std::string code;
  std::string name;
};

// Scientific disciplinary sector: the atomic field every researcher belongs to.
struct Sds {
  std::string code;
  std::string uda;
};

class Taxonomy {
 public:
  // Throws ValidationError on a duplicate SDS code or on a UDA code that was
  // previously registered under a different name.
  void add_sds(std::string sds_code, std::string uda_code, std::string uda_name);

  const Sds* find_sds(std::string_view code) const;
  const Uda* find_uda(std::string_view code) const;

  // Throws std::out_of_range for an unknown SDS.
  const std::string& uda_of(std::string_view sds_code) const;

  // Sorted by code.
  std::vector<std::string> sds_in_uda(std::string_view uda_code) const;

  const std::map<std::string, Sds, std::less<>>& sds() const { return sds_; }
  const std::map<std::string, Uda, std::less<>>& udas() const { return udas_; }

  bool empty() const { return sds_.empty(); }

 private:
  std::map<std::string, Sds, std::less<>> sds_;
  std::map<std::string, Uda, std::less<>> udas_;
};

struct Researcher {
  std::string id;
  std::string university;
  std::string sds;
  AcademicRank rank;
};

struct Publication {
  std::string id;
  int year = 0;
  std::vector<std::string> subject_categories;
  std::int64_t citations = 0;
  int n_authors = 1;
  // Corpus-resident authors only; the remaining n_authors - size() are external.
  std::vector<std::string> author_ids;
};

struct YearWindow {
  int first_year = 0;
  int last_year = 0;

  constexpr bool contains(int year) const noexcept {
    return year >= first_year && year <= last_year;
  }
};

// Validated, immutable collection of researchers and their publications over
// an observation window. Safe to share across threads once built.
class Corpus {
 public:
  // Validates referential integrity and field constraints, collecting every
  // violation into one ValidationError. Publications outside the window are
  // dropped (see dropped_outside_window()). Without an explicit window the
  // span of publication years is used.
  static Corpus build(Taxonomy taxonomy,
                      std::vector<Researcher> researchers,
                      std::vector<Publication> publications,
                      std::optional<YearWindow> window = std::nullopt);

  const Taxonomy& taxonomy() const { return taxonomy_; }
  std::span<const Researcher> researchers() const { return researchers_; }
  std::span<const Publication> publications() const { return publications_; }
  YearWindow window() const { return window_; }
  std::size_t dropped_outside_window() const { return dropped_; }

  std::optional<std::size_t> researcher_index(std::string_view id) const;
  const Researcher* find_researcher(std::string_view id) const;

  // Indices into publications(), in corpus order.
  std::span<const std::size_t> publications_of(std::size_t researcher) const {
    return pubs_by_researcher_[researcher];
  }
  // Indices into researchers().
  std::span<const std::size_t> authors_of(std::size_t publication) const {
    return authors_by_publication_[publication];
  }

  // Sorted, unique.
  std::vector<std::string> universities() const;

 private:
  Corpus() = default;

  Taxonomy taxonomy_;
  std::vector<Researcher> researchers_;
  std::vector<Publication> publications_;
  YearWindow window_;
  std::size_t dropped_ = 0;
  std::unordered_map<std::string, std::size_t> researcher_ids_;
  std::vector<std::vector<std::size_t>> pubs_by_researcher_;
  std::vector<std::vector<std::size_t>> authors_by_publication_;
};

enum class FileFormat { Csv, JsonLines };

struct CorpusPaths {
  std::filesystem::path taxonomy;
  std::filesystem::path researchers;
  std::filesystem::path publications;

  // taxonomy/researchers/publications with a .csv, .jsonl or .ndjson
  // extension, whichever exists (CSV preferred).
  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

// Format is chosen by extension: .jsonl/.ndjson are JSON lines, anything
// else is CSV. Throws IoError for unreadable files and ValidationError for
// parse and integrity problems (with file and line).
Corpus load_corpus(const CorpusPaths& paths, std::optional<YearWindow> window = std::nullopt);

Taxonomy load_taxonomy(const std::filesystem::path& path);

// Writes taxonomy, researchers and publications files into `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                  FileFormat format = FileFormat::Csv);

}  // namespace budding
