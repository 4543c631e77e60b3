#include "budding/percentile.hpp"

#include <algorithm>
#include <numeric>

namespace budding {

std::vector<double> midrank_percentiles(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 100.0);
  if (n <= 1) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  const double denom = static_cast<double>(n - 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Mean of positions i..j-1.
    const double mean_rank = static_cast<double>(i + j - 1) / 2.0;
    const double pct = 100.0 * mean_rank / denom;
    for (std::size_t k = i; k < j; ++k) out[order[k]] = pct;
    i = j;
  }
  return out;
}

}  // namespace budding
