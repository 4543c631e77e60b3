#include "budding/diagnostics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "budding/error.hpp"

namespace budding {

UnproductiveShare unproductive_share(const Corpus& corpus,
                                     const std::optional<std::string>& university) {
  std::size_t population = 0;
  std::size_t no_pubs = 0;
  std::size_t no_impact = 0;
  for (std::size_t r = 0; r < corpus.researchers().size(); ++r) {
    if (university && corpus.researchers()[r].university != *university) continue;
    ++population;
    const auto pubs = corpus.publications_of(r);
    if (pubs.empty()) ++no_pubs;
    const bool cited = std::any_of(pubs.begin(), pubs.end(), [&](std::size_t p) {
      return corpus.publications()[p].citations > 0;
    });
    if (!cited) ++no_impact;
  }
  if (population == 0) {
    throw ValidationError(university ? fmt::format("no researchers at '{}'", *university)
                                     : std::string("corpus has no researchers"));
  }
  const double n = static_cast<double>(population);
  return {population, static_cast<double>(no_pubs) / n, static_cast<double>(no_impact) / n};
}

double top_share_output(const ScoreTable& scores, double top_fraction) {
  if (scores.empty()) throw ValidationError("top share of an empty score table");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw ValidationError(fmt::format("top fraction {} outside (0, 1]", top_fraction));
  }
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& row : scores.rows()) values.push_back(row.p_r);
  std::sort(values.begin(), values.end(), std::greater<>());

  double total = 0.0;
  for (double v : values) total += v;
  if (total <= 0.0) return top_fraction;

  const double head = top_fraction * static_cast<double>(values.size());
  const auto whole = std::min(static_cast<std::size_t>(std::floor(head)), values.size());
  double top = 0.0;
  for (std::size_t i = 0; i < whole; ++i) top += values[i];
  if (whole < values.size()) top += (head - static_cast<double>(whole)) * values[whole];
  return std::min(top / total, 1.0);
}

}  // namespace budding
