#include "depthforge/study/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "depthforge/error.hpp"

namespace depthforge::study {

namespace {

void require_pair(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::dimension_mismatch,
          "correlation inputs differ in length (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  require(a.size() >= 2, ErrorKind::invalid_argument, "correlation needs at least two observations");
}

// Pairs among runs of equal values in a sorted sequence.
template <typename Equal>
std::uint64_t tied_pairs(std::size_t n, Equal equal) {
  std::uint64_t pairs = 0;
  std::uint64_t run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal(i - 1, i)) {
      ++run;
    } else {
      pairs += run * (run - 1) / 2;
      run = 1;
    }
  }
  return pairs + run * (run - 1) / 2;
}

// Sorts v[lo, hi) ascending and returns the number of inversions; ties are
// not inversions.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      buf[k++] = v[i++];
    } else {
      swaps += mid - i;
      buf[k++] = v[j++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  require_pair(a, b);
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  require(saa > 0.0 && sbb > 0.0, ErrorKind::numerical, "zero rank variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  require_pair(a, b);
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x] < a[y] || (a[x] == a[y] && b[x] < b[y]);
  });

  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t ties_a = tied_pairs(n, [&](std::size_t i, std::size_t j) { return a[order[i]] == a[order[j]]; });
  const std::uint64_t ties_ab = tied_pairs(n, [&](std::size_t i, std::size_t j) {
    return a[order[i]] == a[order[j]] && b[order[i]] == b[order[j]];
  });

  std::vector<double> seq(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = b[order[i]];
  std::vector<double> buf(n);
  const std::uint64_t swaps = merge_count(seq, buf, 0, n);
  const std::uint64_t ties_b = tied_pairs(n, [&](std::size_t i, std::size_t j) { return seq[i] == seq[j]; });

  require(ties_a < total && ties_b < total, ErrorKind::numerical, "all-tied input: Kendall tau is undefined");
  // concordant - discordant = total - ties_a - ties_b + ties_ab - 2 * swaps
  const auto numerator = static_cast<std::int64_t>(total - ties_a - ties_b + ties_ab) - 2 * static_cast<std::int64_t>(swaps);
  const double denominator = std::sqrt(static_cast<double>(total - ties_a) * static_cast<double>(total - ties_b));
  return static_cast<double>(numerator) / denominator;
}

}  // namespace depthforge::study
