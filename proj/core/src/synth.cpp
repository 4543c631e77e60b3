#include "budding/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "budding/csv.hpp"
#include "budding/error.hpp"

namespace budding {
namespace {

using nlohmann::json;

// Fixed salts keep the per-purpose random streams independent of each other.
constexpr std::uint64_t kStaffSalt = 0x5354414646ULL;
constexpr std::uint64_t kPubSalt = 0x50554253ULL;
constexpr std::uint64_t kCategorySalt = 0x434154ULL;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

struct StaffMember {
  std::size_t index;  // into the researcher vector
  double log_talent;
  bool producer;
  bool cited;
};

std::string uda_code(int u) { return fmt::format("UDA{:02}", u + 1); }
std::string sds_code(int u, int s) { return fmt::format("S{:02}/{:02}", u + 1, s + 1); }
std::string category_code(int u, int s, int c) {
  return fmt::format("SC{:02}.{:02}.{}", u + 1, s + 1, c + 1);
}

// ---- config (de)serialization --------------------------------------------

template <typename T>
void read_field(const json& obj, std::string_view key, T& out, std::set<std::string>& seen) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  seen.insert(std::string(key));
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("synth config: field '{}': {}", key, e.what()));
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& seen, std::string_view where) {
  std::vector<std::string> issues;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!seen.contains(it.key())) {
      issues.push_back(fmt::format("synth config: unknown field '{}{}'", where, it.key()));
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

template <typename F>
void read_object(const json& obj, std::string_view key, std::set<std::string>& seen, F&& body) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  seen.insert(std::string(key));
  if (!it->is_object()) {
    throw ValidationError(fmt::format("synth config: field '{}' must be an object", key));
  }
  std::set<std::string> inner;
  body(*it, inner);
  reject_unknown(*it, inner, std::string(key) + ".");
}

}  // namespace

SynthConfig parse_synth_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("synth config: invalid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ValidationError("synth config: expected a JSON object");

  SynthConfig c;
  std::set<std::string> seen;
  read_field(doc, "seed", c.seed, seen);
  read_field(doc, "n_universities", c.n_universities, seen);
  read_field(doc, "university_prefix", c.university_prefix, seen);
  read_field(doc, "n_udas", c.n_udas, seen);
  read_field(doc, "sds_per_uda", c.sds_per_uda, seen);
  read_field(doc, "min_faculty_per_cell", c.min_faculty_per_cell, seen);
  read_field(doc, "max_faculty_per_cell", c.max_faculty_per_cell, seen);
  read_field(doc, "sds_presence", c.sds_presence, seen);
  read_object(doc, "rank_mix", seen, [&](const json& o, std::set<std::string>& s) {
    read_field(o, "full", c.rank_mix.full, s);
    read_field(o, "associate", c.rank_mix.associate, s);
    read_field(o, "assistant", c.rank_mix.assistant, s);
  });
  read_field(doc, "confirmed_share", c.confirmed_share, seen);
  read_object(doc, "rank_productivity", seen, [&](const json& o, std::set<std::string>& s) {
    read_field(o, "full", c.rank_productivity.full, s);
    read_field(o, "associate", c.rank_productivity.associate, s);
    read_field(o, "assistant", c.rank_productivity.assistant, s);
  });
  read_field(doc, "first_year", c.first_year, seen);
  read_field(doc, "last_year", c.last_year, seen);
  read_field(doc, "non_producer_share", c.non_producer_share, seen);
  read_field(doc, "uncited_producer_share", c.uncited_producer_share, seen);
  read_field(doc, "talent_sigma", c.talent_sigma, seen);
  read_field(doc, "university_effect_sigma", c.university_effect_sigma, seen);
  read_field(doc, "publications_per_year", c.publications_per_year, seen);
  read_field(doc, "talent_rate_elasticity", c.talent_rate_elasticity, seen);
  read_field(doc, "citation_mu", c.citation_mu, seen);
  read_field(doc, "citation_sigma", c.citation_sigma, seen);
  read_field(doc, "talent_citation_elasticity", c.talent_citation_elasticity, seen);
  read_field(doc, "category_scale_sigma", c.category_scale_sigma, seen);
  read_field(doc, "mean_extra_authors", c.mean_extra_authors, seen);
  read_field(doc, "resident_coauthor_prob", c.resident_coauthor_prob, seen);
  read_field(doc, "categories_per_sds", c.categories_per_sds, seen);
  read_field(doc, "multi_category_prob", c.multi_category_prob, seen);
  reject_unknown(doc, seen, "");
  validate(c);
  return c;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  return parse_synth_config(read_text_file(path));
}

std::string synth_config_to_json(const SynthConfig& c) {
  nlohmann::ordered_json doc = {
      {"seed", c.seed},
      {"n_universities", c.n_universities},
      {"university_prefix", c.university_prefix},
      {"n_udas", c.n_udas},
      {"sds_per_uda", c.sds_per_uda},
      {"min_faculty_per_cell", c.min_faculty_per_cell},
      {"max_faculty_per_cell", c.max_faculty_per_cell},
      {"sds_presence", c.sds_presence},
      {"rank_mix",
       {{"full", c.rank_mix.full}, {"associate", c.rank_mix.associate},
        {"assistant", c.rank_mix.assistant}}},
      {"confirmed_share", c.confirmed_share},
      {"rank_productivity",
       {{"full", c.rank_productivity.full}, {"associate", c.rank_productivity.associate},
        {"assistant", c.rank_productivity.assistant}}},
      {"first_year", c.first_year},
      {"last_year", c.last_year},
      {"non_producer_share", c.non_producer_share},
      {"uncited_producer_share", c.uncited_producer_share},
      {"talent_sigma", c.talent_sigma},
      {"university_effect_sigma", c.university_effect_sigma},
      {"publications_per_year", c.publications_per_year},
      {"talent_rate_elasticity", c.talent_rate_elasticity},
      {"citation_mu", c.citation_mu},
      {"citation_sigma", c.citation_sigma},
      {"talent_citation_elasticity", c.talent_citation_elasticity},
      {"category_scale_sigma", c.category_scale_sigma},
      {"mean_extra_authors", c.mean_extra_authors},
      {"resident_coauthor_prob", c.resident_coauthor_prob},
      {"categories_per_sds", c.categories_per_sds},
      {"multi_category_prob", c.multi_category_prob},
  };
  return doc.dump(2) + "\n";
}

void validate(const SynthConfig& c) {
  std::vector<std::string> issues;
  auto require = [&](bool ok, std::string message) {
    if (!ok) issues.push_back("synth config: " + std::move(message));
  };
  auto probability = [&](double p, std::string_view name) {
    require(p >= 0.0 && p <= 1.0, fmt::format("{} = {} is not a probability", name, p));
  };
  require(c.n_universities >= 1, "n_universities must be at least 1");
  require(!c.university_prefix.empty(), "university_prefix must not be empty");
  require(c.n_udas >= 1, "n_udas must be at least 1");
  require(c.sds_per_uda >= 1, "sds_per_uda must be at least 1");
  require(c.min_faculty_per_cell >= 1, "min_faculty_per_cell must be at least 1");
  require(c.max_faculty_per_cell >= c.min_faculty_per_cell,
          "max_faculty_per_cell must not be below min_faculty_per_cell");
  probability(c.sds_presence, "sds_presence");
  require(c.sds_presence > 0.0, "sds_presence must be positive");
  probability(c.rank_mix.full, "rank_mix.full");
  probability(c.rank_mix.associate, "rank_mix.associate");
  probability(c.rank_mix.assistant, "rank_mix.assistant");
  require(c.rank_mix.full + c.rank_mix.associate + c.rank_mix.assistant > 0.0,
          "rank_mix must have a positive total");
  probability(c.confirmed_share, "confirmed_share");
  require(c.rank_productivity.full > 0.0 && c.rank_productivity.associate > 0.0 &&
              c.rank_productivity.assistant > 0.0,
          "rank_productivity multipliers must be positive");
  require(c.first_year <= c.last_year, "first_year must not exceed last_year");
  probability(c.non_producer_share, "non_producer_share");
  probability(c.uncited_producer_share, "uncited_producer_share");
  require(c.talent_sigma >= 0.0, "talent_sigma must be non-negative");
  require(c.university_effect_sigma >= 0.0, "university_effect_sigma must be non-negative");
  require(c.publications_per_year > 0.0, "publications_per_year must be positive");
  require(c.citation_sigma >= 0.0, "citation_sigma must be non-negative");
  require(c.category_scale_sigma >= 0.0, "category_scale_sigma must be non-negative");
  require(c.mean_extra_authors >= 0.0, "mean_extra_authors must be non-negative");
  probability(c.resident_coauthor_prob, "resident_coauthor_prob");
  require(c.categories_per_sds >= 1, "categories_per_sds must be at least 1");
  probability(c.multi_category_prob, "multi_category_prob");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

Corpus generate(const SynthConfig& c) {
  validate(c);

  Taxonomy taxonomy;
  for (int u = 0; u < c.n_udas; ++u) {
    for (int s = 0; s < c.sds_per_uda; ++s) {
      taxonomy.add_sds(sds_code(u, s), uda_code(u), fmt::format("Area {:02}", u + 1));
    }
  }
  const int n_sds = c.n_udas * c.sds_per_uda;

  // Citation scale per subject category, so that normalization has work to do.
  std::vector<std::vector<double>> category_log_scale(n_sds);
  {
    auto rng = substream(c.seed, kCategorySalt, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& cats : category_log_scale) {
      for (int k = 0; k < c.categories_per_sds; ++k) {
        cats.push_back(c.category_scale_sigma * normal(rng));
      }
    }
  }

  const double rank_total = c.rank_mix.full + c.rank_mix.associate + c.rank_mix.assistant;
  const std::array<double, 3> rank_weights = {c.rank_mix.full / rank_total,
                                              c.rank_mix.associate / rank_total,
                                              c.rank_mix.assistant / rank_total};
  const std::array<double, 3> rank_rate = {c.rank_productivity.full,
                                           c.rank_productivity.associate,
                                           c.rank_productivity.assistant};

  std::vector<Researcher> researchers;
  std::vector<StaffMember> staff;
  std::vector<std::vector<std::size_t>> staff_by_university(c.n_universities);
  // Cited producers per SDS, for resident co-author draws.
  std::vector<std::vector<std::size_t>> coauthor_pool(n_sds);
  std::vector<int> sds_of_staff;

  for (int uni = 0; uni < c.n_universities; ++uni) {
    auto rng = substream(c.seed, kStaffSalt, static_cast<std::uint64_t>(uni));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> cell_size(c.min_faculty_per_cell, c.max_faculty_per_cell);
    std::discrete_distribution<int> rank_draw(rank_weights.begin(), rank_weights.end());

    const std::string university = fmt::format("{}{:02}", c.university_prefix, uni + 1);
    const double university_effect = c.university_effect_sigma * normal(rng);

    std::vector<int> active;
    for (int s = 0; s < n_sds; ++s) {
      if (unit(rng) < c.sds_presence) active.push_back(s);
    }
    if (active.empty()) active.push_back(static_cast<int>(unit(rng) * n_sds) % n_sds);

    int serial = 0;
    for (int s : active) {
      const int n = cell_size(rng);
      for (int k = 0; k < n; ++k) {
        Researcher r;
        r.id = fmt::format("{}-R{:04}", university, ++serial);
        r.university = university;
        r.sds = sds_code(s / c.sds_per_uda, s % c.sds_per_uda);
        r.rank.level = static_cast<RankLevel>(rank_draw(rng));
        r.rank.confirmed = unit(rng) < c.confirmed_share;

        StaffMember m;
        m.index = researchers.size();
        m.log_talent = university_effect + c.talent_sigma * normal(rng);
        m.producer = unit(rng) >= c.non_producer_share;
        const bool uncited = unit(rng) < c.uncited_producer_share;
        m.cited = m.producer && !uncited;

        staff_by_university[uni].push_back(staff.size());
        if (m.cited) coauthor_pool[s].push_back(m.index);
        sds_of_staff.push_back(s);
        staff.push_back(m);
        researchers.push_back(std::move(r));
      }
    }
  }

  const int years = c.last_year - c.first_year + 1;
  std::vector<Publication> publications;
  std::size_t pub_serial = 0;
  for (int uni = 0; uni < c.n_universities; ++uni) {
    auto rng = substream(c.seed, kPubSalt, static_cast<std::uint64_t>(uni));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> year_draw(c.first_year, c.last_year);
    std::poisson_distribution<int> extra_authors(c.mean_extra_authors);

    for (std::size_t member : staff_by_university[uni]) {
      const StaffMember& m = staff[member];
      if (!m.producer) continue;
      const Researcher& lead = researchers[m.index];
      const int s = sds_of_staff[member];
      const int uda = s / c.sds_per_uda;

      const double expected = c.publications_per_year * years *
                              rank_rate[static_cast<std::size_t>(lead.rank.level)] *
                              std::exp(c.talent_rate_elasticity * m.log_talent);
      std::poisson_distribution<int> more(std::max(expected - 1.0, 1e-9));
      const int n_pubs = 1 + more(rng);

      for (int k = 0; k < n_pubs; ++k) {
        Publication p;
        p.id = fmt::format("P{:07}", ++pub_serial);
        p.year = year_draw(rng);

        const int primary = static_cast<int>(unit(rng) * c.categories_per_sds) % c.categories_per_sds;
        p.subject_categories.push_back(category_code(uda, s % c.sds_per_uda, primary));
        if (c.sds_per_uda > 1 && unit(rng) < c.multi_category_prob) {
          int other = static_cast<int>(unit(rng) * (c.sds_per_uda - 1)) % (c.sds_per_uda - 1);
          if (other >= s % c.sds_per_uda) ++other;
          const int cat = static_cast<int>(unit(rng) * c.categories_per_sds) % c.categories_per_sds;
          p.subject_categories.push_back(category_code(uda, other, cat));
        }

        const double z = normal(rng);
        if (m.cited) {
          // Older papers have had longer to collect citations.
          const double age = static_cast<double>(c.last_year - p.year + 1);
          const double log_mean = c.citation_mu + c.talent_citation_elasticity * m.log_talent +
                                  category_log_scale[static_cast<std::size_t>(s)]
                                                    [static_cast<std::size_t>(primary)] +
                                  0.5 * std::log(age / years);
          p.citations = static_cast<std::int64_t>(std::floor(std::exp(log_mean + c.citation_sigma * z)));
        }

        p.n_authors = 1 + extra_authors(rng);
        p.author_ids.push_back(lead.id);
        const auto& pool = coauthor_pool[static_cast<std::size_t>(s)];
        for (int slot = 1; slot < p.n_authors; ++slot) {
          if (unit(rng) >= c.resident_coauthor_prob || pool.size() < 2) continue;
          const auto pick = pool[static_cast<std::size_t>(unit(rng) * pool.size()) % pool.size()];
          const std::string& id = researchers[pick].id;
          if (std::find(p.author_ids.begin(), p.author_ids.end(), id) == p.author_ids.end()) {
            p.author_ids.push_back(id);
          }
        }
        publications.push_back(std::move(p));
      }
    }
  }

  return Corpus::build(std::move(taxonomy), std::move(researchers), std::move(publications),
                       YearWindow{c.first_year, c.last_year});
}

Corpus uniform_dispersion_scenario(SynthConfig config) {
  config.university_effect_sigma = 0.0;
  return generate(config);
}

}  // namespace budding
