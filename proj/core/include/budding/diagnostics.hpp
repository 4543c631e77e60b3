#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "budding/corpus.hpp"
#include "budding/score.hpp"

namespace budding {

struct UnproductiveShare {
  std::size_t population = 0;
  // Researchers without any publication in the window.
  double no_publication = 0.0;
  // Researchers whose publications collected zero citations in total
  // (includes the no-publication group).
  double zero_impact = 0.0;
};

// Throws ValidationError when no researcher matches the filter.
UnproductiveShare unproductive_share(const Corpus& corpus,
                                     const std::optional<std::string>& university = std::nullopt);

// Share of the summed P_R produced by the best `top_fraction` of researchers.
// Fractional head counts are interpolated linearly along the sorted scores,
// so the result is continuous and non-decreasing in top_fraction. When every
// score is zero the output is treated as evenly spread.
double top_share_output(const ScoreTable& scores, double top_fraction);

}  // namespace budding
