#pragma once

#include <span>
#include <vector>

namespace depthforge::study {

/// 1-based ranks; tied values get the mean of the ranks they span.
[[nodiscard]] std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks.
[[nodiscard]] double spearman_rho(std::span<const double> a, std::span<const double> b);

/// Tau-b with tie correction, by sorting on (a, b) and counting the
/// inversions of b with a merge sort (Knight's method). O(n log n).
[[nodiscard]] double kendall_tau(std::span<const double> a, std::span<const double> b);

}  // namespace depthforge::study
