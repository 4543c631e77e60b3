#include "budding/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "budding/csv.hpp"
#include "budding/error.hpp"
#include "records.hpp"

namespace budding {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
  Int value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ValidationError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

std::string_view nonempty(std::string_view text, std::string_view what) {
  if (text.empty()) throw ValidationError(fmt::format("empty {}", what));
  return text;
}

}  // namespace

std::string_view to_string(RankLevel level) {
  switch (level) {
    case RankLevel::Full: return "full";
    case RankLevel::Associate: return "associate";
    case RankLevel::Assistant: return "assistant";
  }
  return "unknown";
}

RankLevel parse_rank_level(std::string_view text) {
  const std::string key = lower(detail::trim(text));
  if (key == "full") return RankLevel::Full;
  if (key == "associate") return RankLevel::Associate;
  if (key == "assistant") return RankLevel::Assistant;
  throw ValidationError(fmt::format("unknown rank level '{}'", text));
}

std::string describe(AcademicRank rank) {
  static constexpr std::string_view kNames[] = {"Full", "Associate", "Assistant"};
  return fmt::format("{} professor ({})", kNames[static_cast<std::size_t>(rank.level)],
                     rank.confirmed ? "confirmed" : "probationary");
}

bool parse_bool(std::string_view text) {
  const std::string key = lower(detail::trim(text));
  if (key == "true") return true;
  if (key == "false") return false;
  throw ValidationError(fmt::format("invalid boolean '{}' (expected true/false)", text));
}

// ---------------------------------------------------------------------------
// Taxonomy

void Taxonomy::add_sds(std::string sds_code, std::string uda_code, std::string uda_name) {
  if (sds_code.empty()) throw ValidationError("empty sds_code");
  if (uda_code.empty()) throw ValidationError(fmt::format("SDS '{}' has an empty uda_code", sds_code));
  if (sds_.contains(sds_code)) {
    throw ValidationError(fmt::format("duplicate SDS '{}'", sds_code));
  }
  if (auto it = udas_.find(uda_code); it != udas_.end()) {
    if (!uda_name.empty() && it->second.name != uda_name) {
      throw ValidationError(fmt::format("UDA '{}' named both '{}' and '{}'", uda_code,
                                        it->second.name, uda_name));
    }
  } else {
    udas_.emplace(uda_code, Uda{uda_code, uda_name.empty() ? uda_code : uda_name});
  }
  sds_.emplace(sds_code, Sds{sds_code, std::move(uda_code)});
}

const Sds* Taxonomy::find_sds(std::string_view code) const {
  auto it = sds_.find(code);
  return it == sds_.end() ? nullptr : &it->second;
}

const Uda* Taxonomy::find_uda(std::string_view code) const {
  auto it = udas_.find(code);
  return it == udas_.end() ? nullptr : &it->second;
}

const std::string& Taxonomy::uda_of(std::string_view sds_code) const {
  auto it = sds_.find(sds_code);
  if (it == sds_.end()) throw std::out_of_range(fmt::format("unknown SDS '{}'", sds_code));
  return it->second.uda;
}

std::vector<std::string> Taxonomy::sds_in_uda(std::string_view uda_code) const {
  std::vector<std::string> out;
  for (const auto& [code, sds] : sds_) {
    if (sds.uda == uda_code) out.push_back(code);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus Corpus::build(Taxonomy taxonomy, std::vector<Researcher> researchers,
                     std::vector<Publication> publications, std::optional<YearWindow> window) {
  std::vector<std::string> issues;

  if (!window) {
    if (publications.empty()) {
      window = YearWindow{0, 0};
    } else {
      auto [lo, hi] = std::minmax_element(
          publications.begin(), publications.end(),
          [](const Publication& a, const Publication& b) { return a.year < b.year; });
      window = YearWindow{lo->year, hi->year};
    }
  }
  if (window->first_year > window->last_year) {
    issues.push_back(fmt::format("empty observation window {}-{}", window->first_year,
                                 window->last_year));
  }

  Corpus corpus;
  corpus.window_ = *window;

  corpus.researcher_ids_.reserve(researchers.size());
  for (std::size_t i = 0; i < researchers.size(); ++i) {
    const Researcher& r = researchers[i];
    if (r.id.empty()) issues.push_back(fmt::format("researcher #{} has an empty id", i + 1));
    if (r.university.empty()) issues.push_back(fmt::format("researcher '{}' has no university", r.id));
    if (!corpus.researcher_ids_.emplace(r.id, i).second) {
      issues.push_back(fmt::format("duplicate researcher id '{}'", r.id));
    }
    if (!taxonomy.find_sds(r.sds)) {
      issues.push_back(fmt::format("researcher '{}' references unknown SDS '{}'", r.id, r.sds));
    }
  }

  std::unordered_set<std::string> pub_ids;
  pub_ids.reserve(publications.size());
  std::vector<Publication> kept;
  kept.reserve(publications.size());
  std::size_t dropped = 0;
  for (Publication& p : publications) {
    bool ok = true;
    auto fail = [&](std::string message) {
      issues.push_back(fmt::format("publication '{}': {}", p.id, message));
      ok = false;
    };
    if (p.id.empty()) fail("empty id");
    if (!pub_ids.insert(p.id).second) fail("duplicate publication id");
    if (p.subject_categories.empty()) fail("no subject categories");
    {
      std::set<std::string_view> seen;
      for (const auto& cat : p.subject_categories) {
        if (cat.empty()) fail("empty subject category");
        else if (!seen.insert(cat).second) fail(fmt::format("repeated subject category '{}'", cat));
      }
    }
    if (p.citations < 0) fail(fmt::format("negative citation count {}", p.citations));
    if (p.n_authors < 1) fail(fmt::format("author count {} is not positive", p.n_authors));
    if (static_cast<std::size_t>(std::max(p.n_authors, 0)) < p.author_ids.size()) {
      fail(fmt::format("lists {} resident authors but n_authors is {}", p.author_ids.size(),
                       p.n_authors));
    }
    {
      std::set<std::string_view> seen;
      for (const auto& id : p.author_ids) {
        if (!corpus.researcher_ids_.contains(id)) {
          fail(fmt::format("references unknown researcher id '{}'", id));
        } else if (!seen.insert(id).second) {
          fail(fmt::format("lists researcher '{}' twice", id));
        }
      }
    }
    if (!ok) continue;
    if (!window->contains(p.year)) {
      ++dropped;
      continue;
    }
    kept.push_back(std::move(p));
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));

  corpus.taxonomy_ = std::move(taxonomy);
  corpus.researchers_ = std::move(researchers);
  corpus.publications_ = std::move(kept);
  corpus.dropped_ = dropped;

  corpus.pubs_by_researcher_.assign(corpus.researchers_.size(), {});
  corpus.authors_by_publication_.resize(corpus.publications_.size());
  for (std::size_t p = 0; p < corpus.publications_.size(); ++p) {
    auto& authors = corpus.authors_by_publication_[p];
    for (const auto& id : corpus.publications_[p].author_ids) {
      const std::size_t r = corpus.researcher_ids_.at(id);
      authors.push_back(r);
      corpus.pubs_by_researcher_[r].push_back(p);
    }
  }
  return corpus;
}

std::optional<std::size_t> Corpus::researcher_index(std::string_view id) const {
  auto it = researcher_ids_.find(std::string(id));
  if (it == researcher_ids_.end()) return std::nullopt;
  return it->second;
}

const Researcher* Corpus::find_researcher(std::string_view id) const {
  auto idx = researcher_index(id);
  return idx ? &researchers_[*idx] : nullptr;
}

std::vector<std::string> Corpus::universities() const {
  std::set<std::string> names;
  for (const auto& r : researchers_) names.insert(r.university);
  return {names.begin(), names.end()};
}

// ---------------------------------------------------------------------------
// Loading

namespace {

constexpr std::string_view kTaxonomyFields[] = {"sds_code", "uda_code", "uda_name"};
constexpr std::string_view kResearcherFields[] = {"id", "university", "sds_code", "rank_level",
                                                  "confirmed"};
constexpr std::string_view kPublicationFields[] = {"id",        "year",      "subject_categories",
                                                   "citations", "n_authors", "author_ids"};

std::filesystem::path pick(const std::filesystem::path& dir, std::string_view stem) {
  for (std::string_view ext : {".csv", ".jsonl", ".ndjson"}) {
    auto candidate = dir / (std::string(stem) + std::string(ext));
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return dir / (std::string(stem) + ".csv");
}

std::vector<Researcher> load_researchers(const std::filesystem::path& path,
                                         std::vector<std::string>& issues) {
  auto set = detail::read_records(path, kResearcherFields);
  std::vector<Researcher> out;
  out.reserve(set.records.size());
  for (const auto& rec : set.records) {
    try {
      Researcher r;
      r.id = nonempty(rec.values[0], "id");
      r.university = nonempty(rec.values[1], "university");
      r.sds = nonempty(rec.values[2], "sds_code");
      r.rank.level = parse_rank_level(rec.values[3]);
      r.rank.confirmed = parse_bool(rec.values[4]);
      out.push_back(std::move(r));
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  return out;
}

std::vector<Publication> load_publications(const std::filesystem::path& path,
                                           std::vector<std::string>& issues) {
  auto set = detail::read_records(path, kPublicationFields);
  std::vector<Publication> out;
  out.reserve(set.records.size());
  for (const auto& rec : set.records) {
    try {
      Publication p;
      p.id = nonempty(rec.values[0], "id");
      p.year = parse_int<int>(rec.values[1], "year");
      p.subject_categories = detail::split_list(rec.values[2]);
      p.citations = parse_int<std::int64_t>(rec.values[3], "citations");
      p.n_authors = parse_int<int>(rec.values[4], "n_authors");
      p.author_ids = detail::split_list(rec.values[5]);
      out.push_back(std::move(p));
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  return out;
}

}  // namespace

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return {pick(dir, "taxonomy"), pick(dir, "researchers"), pick(dir, "publications")};
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  auto set = detail::read_records(path, kTaxonomyFields);
  Taxonomy taxonomy;
  std::vector<std::string> issues;
  for (const auto& rec : set.records) {
    try {
      taxonomy.add_sds(rec.values[0], rec.values[1], rec.values[2]);
    } catch (const ValidationError& e) {
      issues.push_back(fmt::format("{}: {}", detail::location(set, rec), e.what()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return taxonomy;
}

Corpus load_corpus(const CorpusPaths& paths, std::optional<YearWindow> window) {
  Taxonomy taxonomy = load_taxonomy(paths.taxonomy);
  std::vector<std::string> issues;
  auto researchers = load_researchers(paths.researchers, issues);
  auto publications = load_publications(paths.publications, issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return Corpus::build(std::move(taxonomy), std::move(researchers), std::move(publications),
                       window);
}

// ---------------------------------------------------------------------------
// Writing

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += items[i];
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir, FileFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  const bool jsonl = format == FileFormat::JsonLines;
  const std::string ext = jsonl ? ".jsonl" : ".csv";

  {
    auto out = open_output(dir / ("taxonomy" + ext));
    CsvWriter csv(out);
    if (!jsonl) csv.row({"sds_code", "uda_code", "uda_name"});
    for (const auto& [code, sds] : corpus.taxonomy().sds()) {
      const Uda* uda = corpus.taxonomy().find_uda(sds.uda);
      if (jsonl) {
        out << nlohmann::json{{"sds_code", code}, {"uda_code", sds.uda}, {"uda_name", uda->name}}
                   .dump()
            << '\n';
      } else {
        csv.row({code, sds.uda, uda->name});
      }
    }
  }
  {
    auto out = open_output(dir / ("researchers" + ext));
    CsvWriter csv(out);
    if (!jsonl) csv.row({"id", "university", "sds_code", "rank_level", "confirmed"});
    for (const auto& r : corpus.researchers()) {
      const std::string level(to_string(r.rank.level));
      if (jsonl) {
        out << nlohmann::json{{"id", r.id},
                              {"university", r.university},
                              {"sds_code", r.sds},
                              {"rank_level", level},
                              {"confirmed", r.rank.confirmed}}
                   .dump()
            << '\n';
      } else {
        csv.row({r.id, r.university, r.sds, level, r.rank.confirmed ? "true" : "false"});
      }
    }
  }
  {
    auto out = open_output(dir / ("publications" + ext));
    CsvWriter csv(out);
    if (!jsonl) {
      csv.row({"id", "year", "subject_categories", "citations", "n_authors", "author_ids"});
    }
    for (const auto& p : corpus.publications()) {
      if (jsonl) {
        out << nlohmann::json{{"id", p.id},
                              {"year", p.year},
                              {"subject_categories", p.subject_categories},
                              {"citations", p.citations},
                              {"n_authors", p.n_authors},
                              {"author_ids", p.author_ids}}
                   .dump()
            << '\n';
      } else {
        csv.row({p.id, std::to_string(p.year), join(p.subject_categories),
                 std::to_string(p.citations), std::to_string(p.n_authors), join(p.author_ids)});
      }
    }
  }
}

}  // namespace budding
