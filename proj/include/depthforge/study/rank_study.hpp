#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "depthforge/depth_optimizer.hpp"
#include "depthforge/study/generators.hpp"

namespace depthforge::study {

struct RankStudySpec {
  Distribution dist = Distribution::gaussian;  // gaussian or student_t
  double nu = 5.0;
  std::size_t dim = 5;
  std::size_t n = 10'000;
  std::size_t query_count = 500;
  std::uint64_t seed = 1;
};

struct RankCorrelation {
  std::string left;
  std::string right;
  double spearman;
  double kendall;
};

struct RankStudyResult {
  Distribution dist;
  double nu;
  std::size_t dim;
  std::size_t query_count;
  /// Every pair among PDF, the requested notions and D_M(MLE), PDF pairs first.
  std::vector<RankCorrelation> rows;

  [[nodiscard]] const RankCorrelation& find(const std::string& left, const std::string& right) const;
};

/// Label used in result rows: "PDF", "D_H", "D_P", "D_AP", "D_M".
[[nodiscard]] std::string notion_label(DepthNotion notion);

/// Samples the data, picks `query_count` of its points, computes each notion's
/// depth by refined random search (cfg.seed, queries in parallel) plus the
/// Mahalanobis depth under the MLE, and rank-correlates every pair.
[[nodiscard]] RankStudyResult rank_study(const RankStudySpec& spec, const std::vector<DepthNotion>& notions,
                                         const RrsConfig& cfg);

/// Columns dist,nu,d,queries,left,right,spearman,kendall.
void write_rank_csv(std::ostream& out, const std::vector<RankStudyResult>& results);

}  // namespace depthforge::study
