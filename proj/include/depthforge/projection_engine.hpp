#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "depthforge/direction_sampler.hpp"
#include "depthforge/matrix.hpp"
#include "depthforge/simd/kernels.hpp"

namespace depthforge {

/// m x n projection scores; row j holds every observation projected onto u_j.
using ProjectionMatrix = Matrix;

struct ParallelConfig {
  std::size_t workers = 1;
  /// Tasks (direction, observation pairs) per block.
  std::size_t block_size = 256;
  /// Longest stretch of the reduction axis handled in one pass.
  std::size_t d_chunk = 256;
};

void validate(const ParallelConfig& cfg);

/// The data stored coordinate-major (d x n) for the tile kernels. Building it
/// once amortizes the transpose across all refinements of a search.
class PackedDataset {
 public:
  explicit PackedDataset(const Dataset& data);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return d_; }
  [[nodiscard]] const double* coordinate(std::size_t l) const noexcept { return values_.data() + l * n_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
};

/// Straightforward triple loop, single worker. Each score is the in-order
/// fused multiply-add chain over the coordinates.
[[nodiscard]] ProjectionMatrix project_naive(const Dataset& data, const DirectionBatch& dirs);

/// Same scores as project_naive, bit for bit, computed on a grid of tiles.
/// Blocks of `block_size` tasks are claimed by up to `workers` threads; every
/// inner product is split into chunks of `d_chunk` coordinates accumulated in
/// chunk order.
[[nodiscard]] ProjectionMatrix project_parallel(const Dataset& data, const DirectionBatch& dirs,
                                                const ParallelConfig& cfg);
[[nodiscard]] ProjectionMatrix project_parallel(const PackedDataset& data, const DirectionBatch& dirs,
                                                const ParallelConfig& cfg, const simd::KernelTable& kernels);

/// Writes the scores of directions [first, first + count) into `out`
/// (row stride n). Lower-level entry point used by the optimizer.
void project_rows(const PackedDataset& data, const Matrix& directions, std::size_t first, std::size_t count,
                  double* out, const ParallelConfig& cfg, const simd::KernelTable& kernels);

/// z . u_j for every direction.
[[nodiscard]] std::vector<double> project_point(std::span<const double> z, const DirectionBatch& dirs,
                                                const ParallelConfig& cfg);
[[nodiscard]] std::vector<double> project_point(std::span<const double> z, const Matrix& directions,
                                                const ParallelConfig& cfg);

}  // namespace depthforge
