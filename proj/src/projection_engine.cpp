#include "depthforge/projection_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthforge/error.hpp"
#include "depthforge/parallel.hpp"
#include "depthforge/simd/dispatch.hpp"

namespace depthforge {

namespace {

void require_dims(std::size_t data_dim, std::size_t dir_dim) {
  require(data_dim == dir_dim, ErrorKind::dimension_mismatch,
          "directions have " + std::to_string(dir_dim) + " coordinates but the data has " +
              std::to_string(data_dim));
}

}  // namespace

void validate(const ParallelConfig& cfg) {
  require(cfg.workers >= 1, ErrorKind::invalid_argument, "workers must be at least 1");
  require(cfg.block_size >= 1, ErrorKind::invalid_argument, "block size must be at least 1");
  require(cfg.d_chunk >= 1, ErrorKind::invalid_argument, "d_chunk must be at least 1");
}

PackedDataset::PackedDataset(const Dataset& data) : n_(data.size()), d_(data.dim()), values_(n_ * d_) {
  const double* src = data.matrix().data();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t l = 0; l < d_; ++l) values_[l * n_ + i] = src[i * d_ + l];
}

ProjectionMatrix project_naive(const Dataset& data, const DirectionBatch& dirs) {
  require_dims(data.dim(), dirs.dim());
  const std::size_t m = dirs.count();
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  ProjectionMatrix p(m, n);
  for (std::size_t j = 0; j < m; ++j) {
    const auto u = dirs.directions.row(j);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = data.row(i);
      double acc = 0.0;
      for (std::size_t l = 0; l < d; ++l) acc = std::fma(u[l], x[l], acc);
      p(j, i) = acc;
    }
  }
  return p;
}

void project_rows(const PackedDataset& data, const Matrix& directions, std::size_t first, std::size_t count,
                  double* out, const ParallelConfig& cfg, const simd::KernelTable& kernels) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  if (count == 0) return;

  // A block is a tile of `panel` directions by `width` observations, about
  // block_size tasks in total.
  const std::size_t panel = std::min({simd::kMaxTileRows, cfg.block_size, count});
  const std::size_t width = std::min(n, std::max<std::size_t>(1, cfg.block_size / panel));
  const std::size_t panels = (count + panel - 1) / panel;
  const std::size_t strips = (n + width - 1) / width;
  const std::size_t blocks = panels * strips;
  const std::size_t grain = std::max<std::size_t>(1, blocks / (cfg.workers * 16));

  parallel_for(blocks, cfg.workers, grain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      // Direction panels vary fastest so consecutive blocks share an
      // observation strip.
      const std::size_t strip = b / panels;
      const std::size_t row0 = (b % panels) * panel;
      const std::size_t col0 = strip * width;
      simd::TileArgs args{};
      args.u = directions.data() + (first + row0) * d;
      args.u_stride = d;
      args.rows = std::min(panel, count - row0);
      args.xt = data.coordinate(0) + col0;
      args.xt_stride = n;
      args.cols = std::min(width, n - col0);
      args.out = out + row0 * n + col0;
      args.out_stride = n;
      for (std::size_t l = 0; l < d; l += cfg.d_chunk) {
        args.depth_begin = l;
        args.depth_end = std::min(d, l + cfg.d_chunk);
        args.accumulate = l > 0;
        kernels.project_tile(args);
      }
    }
  });
}

ProjectionMatrix project_parallel(const PackedDataset& data, const DirectionBatch& dirs, const ParallelConfig& cfg,
                                  const simd::KernelTable& kernels) {
  validate(cfg);
  require_dims(data.dim(), dirs.dim());
  ProjectionMatrix p(dirs.count(), data.size());
  project_rows(data, dirs.directions, 0, dirs.count(), p.data(), cfg, kernels);
  return p;
}

ProjectionMatrix project_parallel(const Dataset& data, const DirectionBatch& dirs, const ParallelConfig& cfg) {
  validate(cfg);
  require_dims(data.dim(), dirs.dim());
  return project_parallel(PackedDataset(data), dirs, cfg, simd::active_kernels());
}

std::vector<double> project_point(std::span<const double> z, const Matrix& directions, const ParallelConfig& cfg) {
  validate(cfg);
  require_dims(z.size(), directions.cols());
  const std::size_t m = directions.rows();
  const std::size_t d = directions.cols();
  std::vector<double> out(m);
  parallel_for(m, cfg.workers, std::max<std::size_t>(64, m / (cfg.workers * 8) + 1),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t j = begin; j < end; ++j) {
                   const auto u = directions.row(j);
                   double acc = 0.0;
                   for (std::size_t l = 0; l < d; ++l) acc = std::fma(u[l], z[l], acc);
                   out[j] = acc;
                 }
               });
  return out;
}

std::vector<double> project_point(std::span<const double> z, const DirectionBatch& dirs, const ParallelConfig& cfg) {
  return project_point(z, dirs.directions, cfg);
}

}  // namespace depthforge
