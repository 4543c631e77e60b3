#pragma once

#include <span>
#include <vector>

namespace budding {

// Mid-rank percentile on a 0..100 (worst..best) scale: values are sorted
// ascending, each tie group gets the mean of its 0-based positions r, and the
// percentile is 100 * r / (N - 1). A single value gets 100.
std::vector<double> midrank_percentiles(std::span<const double> values);

}  // namespace budding
