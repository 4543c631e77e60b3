#pragma once

#include <cstddef>
#include <string>

#include "budding/corpus.hpp"

namespace budding::testkit {

// Largest absolute engine-vs-oracle difference per quantity.
struct OracleComparison {
  double median = 0.0;
  double p_r = 0.0;
  double percentile = 0.0;
  double p_s = 0.0;
  double sds_mean = 0.0;
  double p_u = 0.0;
  double overall = 0.0;
  // Keys present on one side only.
  std::size_t missing = 0;

  double worst() const;
  std::string describe() const;
};

OracleComparison compare_with_oracle(const Corpus& corpus);

}  // namespace budding::testkit
