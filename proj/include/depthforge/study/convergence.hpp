#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "depthforge/matrix.hpp"
#include "depthforge/univariate_depth.hpp"

namespace depthforge::study {

/// High-budget search whose best-of-`repeats` result serves as the reference
/// depth of each query.
struct ReferenceSpec {
  std::size_t k = 200'000;
  std::size_t r = 50;
  double alpha = 0.9;
  std::size_t repeats = 3;
};

struct StudyGrid {
  std::vector<double> alphas;
  std::vector<std::size_t> refinement_counts;
  std::vector<std::size_t> direction_counts;
  std::vector<std::size_t> dims;
  std::size_t query_count = 20;
  ReferenceSpec reference;
  std::uint64_t seed = 1;
  /// Also recompute the reference from scratch as an extra cell; its error is
  /// zero exactly when the searches are reproducible.
  bool verify_reference = false;
};

/// Throws invalid_argument naming the offending axis.
void validate(const StudyGrid& grid);

/// Seed of repeat `repeat` for query `point`. Grid cells use repeat 0.
[[nodiscard]] std::uint64_t query_seed(std::uint64_t base, std::size_t point, std::size_t repeat);

struct ConvergenceCell {
  double alpha;
  std::size_t r;
  std::size_t k;
  std::size_t d;
  bool reference;
  std::vector<double> squared_errors;  // per query
  double mse;                          // mean over queries
};

struct ConvergenceTable {
  std::vector<double> reference_depths;
  std::vector<ConvergenceCell> cells;
};

/// Runs every (alpha, r, k) cell of the grid for each query and compares with
/// the reference. Cells and queries run concurrently, one worker per search.
[[nodiscard]] ConvergenceTable convergence_study(const StudyGrid& grid, DepthNotion notion, const Dataset& data,
                                                 const Matrix& queries, std::size_t workers);

/// Long form: alpha,r,k,d,point_id,mse,cell. point_id "mean" rows carry the
/// mean over queries; cell is "grid" or "reference".
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

struct FrontierRow {
  std::size_t d;
  std::size_t k;
  double alpha;
  /// Smallest r at which every query has squared error <= tol.
  std::optional<std::size_t> min_r;
  bool all_converged;
  /// Mean over converged queries of each query's own smallest converging r.
  std::optional<double> mean_point_min_r;
  std::size_t converged_points;
};

[[nodiscard]] std::vector<FrontierRow> convergence_frontier(const ConvergenceTable& table, double tol);

/// Columns d,k,alpha,min_r,all_converged,mean_point_min_r,converged_points;
/// "none" marks a cell that never converges.
void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows);

}  // namespace depthforge::study
