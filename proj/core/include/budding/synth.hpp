#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "budding/corpus.hpp"

namespace budding {

struct RankMix {
  double full = 0.336;
  double associate = 0.335;
  double assistant = 0.329;
};

// Publication-rate multipliers per rank level.
struct RankProductivity {
  double full = 1.25;
  double associate = 1.0;
  double assistant = 0.85;
};

// Parameters of a synthetic national corpus. Every random draw derives from
// `seed`, so a config maps to exactly one corpus.
struct SynthConfig {
  std::uint64_t seed = 1;

  int n_universities = 20;
  std::string university_prefix = "U";
  int n_udas = 5;
  int sds_per_uda = 6;
  // Faculty per (university, sds) for active cells, drawn uniformly.
  int min_faculty_per_cell = 2;
  int max_faculty_per_cell = 14;
  // Probability that a university is active in a given SDS.
  double sds_presence = 0.9;

  RankMix rank_mix;
  double confirmed_share = 0.8;
  RankProductivity rank_productivity;

  int first_year = 2004;
  int last_year = 2008;

  // Researchers without publications.
  double non_producer_share = 0.168;
  // Producers whose publications are never cited.
  double uncited_producer_share = 0.094;

  // Researcher talent is lognormal(0, talent_sigma); each university shifts
  // the log-talent of its staff by a normal(0, university_effect_sigma) draw.
  double talent_sigma = 1.3;
  double university_effect_sigma = 0.25;

  // Expected publications per year for a median producer.
  double publications_per_year = 1.6;
  // How strongly talent raises the publication rate (exponent on talent).
  double talent_rate_elasticity = 0.6;

  // Citations: floor(lognormal) with log-mean citation_mu + elasticity *
  // log-talent + log-category-scale, and log-sd citation_sigma.
  double citation_mu = 1.6;
  double citation_sigma = 1.0;
  double talent_citation_elasticity = 0.6;
  // Log-sd of the per-category citation scale.
  double category_scale_sigma = 0.5;

  // Authors per publication: 1 + Poisson(mean_extra_authors).
  double mean_extra_authors = 3.0;
  // Chance that each extra author slot is a corpus colleague in the same SDS.
  double resident_coauthor_prob = 0.15;

  int categories_per_sds = 2;
  // Chance a publication carries a second subject category from its UDA.
  double multi_category_prob = 0.15;
};

// Parses a JSON document; missing fields keep their defaults, unknown fields
// are rejected. Throws ValidationError.
SynthConfig parse_synth_config(std::string_view json_text);
SynthConfig load_synth_config(const std::filesystem::path& path);
std::string synth_config_to_json(const SynthConfig& config);

// Throws ValidationError for infeasible parameters.
void validate(const SynthConfig& config);

Corpus generate(const SynthConfig& config);

// Same generator with the university effect switched off: every university
// draws its staff from one performance distribution.
Corpus uniform_dispersion_scenario(SynthConfig config);

}  // namespace budding
