#include "depthforge/depth_optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "depthforge/direction_sampler.hpp"
#include "depthforge/error.hpp"
#include "depthforge/parallel.hpp"
#include "depthforge/rng.hpp"
#include "depthforge/simd/dispatch.hpp"

namespace depthforge {

namespace {

using Clock = std::chrono::steady_clock;

// Projection slab held at once, in doubles (4 MiB): small enough that the
// univariate step reads it back from cache.
constexpr std::size_t kSlabValues = std::size_t{1} << 19;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_query(std::span<const double> z, std::size_t d) {
  require(z.size() == d, ErrorKind::dimension_mismatch,
          "query has " + std::to_string(z.size()) + " coordinates but the data has " + std::to_string(d));
  require(std::all_of(z.begin(), z.end(), [](double x) { return std::isfinite(x); }), ErrorKind::invalid_argument,
          "query is not finite");
}

double cap_angle(const RrsConfig& cfg, std::size_t refinement) {
  return std::numbers::pi / 2 * std::pow(cfg.shrink, static_cast<double>(refinement));
}

SelectionScratch& worker_scratch() {
  thread_local SelectionScratch scratch;
  return scratch;
}

// Folds the depths of one refinement into the incumbent.
Incumbent settle_refinement(Incumbent incumbent, std::span<const double> depths, const Matrix& directions,
                            PoleUpdate rule) {
  if (rule == PoleUpdate::per_direction) {
    for (std::size_t j = 0; j < depths.size(); ++j) {
      if (depths[j] < incumbent.depth) {
        incumbent.depth = depths[j];
        const auto u = directions.row(j);
        incumbent.pole.assign(u.begin(), u.end());
      }
    }
    return incumbent;
  }
  const auto best = std::min_element(depths.begin(), depths.end());
  return pole_update_rule(incumbent, *best, directions.row(static_cast<std::size_t>(best - depths.begin())));
}

DepthResult finish(Incumbent incumbent, std::vector<TraceEntry> trace, std::size_t used) {
  DepthResult result;
  result.depth = incumbent.depth;
  result.argmin_direction = std::move(incumbent.pole);
  result.trace = std::move(trace);
  result.directions_used = used;
  return result;
}

}  // namespace

void validate(const RrsConfig& cfg) {
  require(cfg.refinements >= 1, ErrorKind::invalid_argument, "refinements must be at least 1");
  require(cfg.total_directions >= cfg.refinements, ErrorKind::invalid_argument,
          "total directions must be at least the number of refinements");
  require(cfg.shrink > 0.0 && cfg.shrink < 1.0, ErrorKind::invalid_argument, "shrink factor must lie in (0, 1)");
  validate(cfg.parallel);
}

Incumbent pole_update_rule(const Incumbent& current, double candidate_depth,
                           std::span<const double> candidate_direction) {
  if (!(candidate_depth < current.depth)) return current;
  return Incumbent{candidate_depth, std::vector<double>(candidate_direction.begin(), candidate_direction.end())};
}

DepthSearch::DepthSearch(const Dataset& data)
    : data_(&data), packed_(data), kernels_(&simd::active_kernels()) {}

DepthResult DepthSearch::run(std::span<const double> z, const RrsConfig& cfg, PhaseTimes* times) const {
  validate(cfg);
  const std::size_t n = data_->size();
  const std::size_t d = data_->dim();
  require_query(z, d);
  const std::size_t m = cfg.directions_per_refinement();
  const ParallelConfig& par = cfg.parallel;
  const std::size_t slab_rows = std::clamp<std::size_t>(kSlabValues / n, 1, m);

  PhaseTimes local;
  PhaseTimes& t = times ? *times : local;
  t = PhaseTimes{};
  const auto start = Clock::now();

  Incumbent incumbent{1.0, std::vector<double>(d, 0.0)};
  incumbent.pole[0] = 1.0;
  std::vector<TraceEntry> trace;
  trace.reserve(cfg.refinements);
  std::vector<double> scores(slab_rows * n);
  std::vector<double> depths(m);

  for (std::size_t l = 0; l < cfg.refinements; ++l) {
    const double epsilon = cap_angle(cfg, l);
    const CapSpec cap{Pole(incumbent.pole), epsilon};

    auto phase = Clock::now();
    const DirectionBatch batch = generate_batch(cap, m, cfg.seed, static_cast<std::uint32_t>(l), par.workers);
    t.generation += seconds_since(phase);

    phase = Clock::now();
    const std::vector<double> zp = project_point(z, batch.directions, par);
    t.projection += seconds_since(phase);

    for (std::size_t first = 0; first < m; first += slab_rows) {
      const std::size_t rows = std::min(slab_rows, m - first);
      phase = Clock::now();
      project_rows(packed_, batch.directions, first, rows, scores.data(), par, *kernels_);
      t.projection += seconds_since(phase);

      phase = Clock::now();
      parallel_for(rows, par.workers, std::max<std::size_t>(1, rows / (par.workers * 4)),
                   [&](std::size_t begin, std::size_t end) {
                     SelectionScratch& scratch = worker_scratch();
                     for (std::size_t j = begin; j < end; ++j) {
                       depths[first + j] = univariate_depth(cfg.notion, std::span<const double>(scores.data() + j * n, n),
                                                            zp[first + j], *kernels_, scratch);
                     }
                   });
      t.univariate += seconds_since(phase);
    }

    incumbent = settle_refinement(std::move(incumbent), depths, batch.directions, cfg.pole_update);
    trace.push_back(TraceEntry{incumbent.depth, epsilon,
                               std::vector<double>(cap.pole.coords().begin(), cap.pole.coords().end())});
  }
  t.total = seconds_since(start);
  return finish(std::move(incumbent), std::move(trace), m * cfg.refinements);
}

DepthResult DepthSearch::run_sequential(std::span<const double> z, const RrsConfig& cfg, PhaseTimes* times) const {
  validate(cfg);
  const std::size_t n = data_->size();
  const std::size_t d = data_->dim();
  require_query(z, d);
  const std::size_t m = cfg.directions_per_refinement();
  const simd::KernelTable& kernels = simd::detail::kScalarKernels;

  PhaseTimes local;
  PhaseTimes& t = times ? *times : local;
  t = PhaseTimes{};
  const auto start = Clock::now();

  Incumbent incumbent{1.0, std::vector<double>(d, 0.0)};
  incumbent.pole[0] = 1.0;
  std::vector<TraceEntry> trace;
  trace.reserve(cfg.refinements);
  Matrix directions(m, d);
  std::vector<double> depths(m);
  std::vector<double> projected(n);
  SelectionScratch scratch;
  const double* x = data_->matrix().data();

  for (std::size_t l = 0; l < cfg.refinements; ++l) {
    const double epsilon = cap_angle(cfg, l);
    const CapSpec cap{Pole(incumbent.pole), epsilon};
    for (std::size_t j = 0; j < m; ++j) {
      auto phase = Clock::now();
      Substream stream = direction_stream(cfg.seed, static_cast<std::uint32_t>(l), j);
      const auto u = directions.row(j);
      random_sphere_pole(cap, stream, u);
      t.generation += seconds_since(phase);

      phase = Clock::now();
      double zu = 0.0;
      for (std::size_t c = 0; c < d; ++c) zu = std::fma(u[c], z[c], zu);
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = x + i * d;
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc = std::fma(u[c], row[c], acc);
        projected[i] = acc;
      }
      t.projection += seconds_since(phase);

      phase = Clock::now();
      depths[j] = univariate_depth(cfg.notion, projected, zu, kernels, scratch);
      t.univariate += seconds_since(phase);
    }
    incumbent = settle_refinement(std::move(incumbent), depths, directions, cfg.pole_update);
    trace.push_back(TraceEntry{incumbent.depth, epsilon,
                               std::vector<double>(cap.pole.coords().begin(), cap.pole.coords().end())});
  }
  t.total = seconds_since(start);
  return finish(std::move(incumbent), std::move(trace), m * cfg.refinements);
}

std::vector<double> DepthSearch::directional_depths(std::span<const double> z, const Matrix& directions,
                                                    DepthNotion notion, const ParallelConfig& par) const {
  validate(par);
  const std::size_t n = data_->size();
  require_query(z, data_->dim());
  require(directions.cols() == data_->dim(), ErrorKind::dimension_mismatch,
          "directions do not match the data dimension");
  const std::size_t m = directions.rows();
  const std::vector<double> zp = project_point(z, directions, par);
  std::vector<double> scores(m * n);
  project_rows(packed_, directions, 0, m, scores.data(), par, *kernels_);
  std::vector<double> depths(m);
  parallel_for(m, par.workers, 1, [&](std::size_t begin, std::size_t end) {
    SelectionScratch& scratch = worker_scratch();
    for (std::size_t j = begin; j < end; ++j)
      depths[j] = univariate_depth(notion, std::span<const double>(scores.data() + j * n, n), zp[j], *kernels_, scratch);
  });
  return depths;
}

DepthResult simple_random_search(std::span<const double> z, const Dataset& data, std::size_t k, DepthNotion notion,
                                 std::uint64_t seed) {
  require(k >= 1, ErrorKind::invalid_argument, "at least one direction is required");
  RrsConfig cfg;
  cfg.total_directions = k;
  cfg.refinements = 1;
  cfg.notion = notion;
  cfg.seed = seed;
  cfg.parallel.workers = resolve_workers();
  return DepthSearch(data).run(z, cfg);
}

DepthResult refined_random_search(std::span<const double> z, const Dataset& data, const RrsConfig& cfg) {
  return DepthSearch(data).run(z, cfg);
}

DepthResult refined_random_search(std::span<const double> z, const Dataset& data, const RrsConfig& cfg, ExecPath path,
                                  PhaseTimes& times) {
  const DepthSearch search(data);
  return path == ExecPath::sequential ? search.run_sequential(z, cfg, &times) : search.run(z, cfg, &times);
}

std::vector<DepthResult> depth_batch(const std::vector<std::vector<double>>& queries, const Dataset& data,
                                     const RrsConfig& cfg) {
  validate(cfg);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    require(queries[i].size() == data.dim(), ErrorKind::dimension_mismatch,
            "query " + std::to_string(i) + " has " + std::to_string(queries[i].size()) +
                " coordinates but the data has " + std::to_string(data.dim()));
  }
  const DepthSearch search(data);
  std::vector<DepthResult> results(queries.size());
  // Parallelism goes across queries; each search runs on one worker.
  RrsConfig inner = cfg;
  inner.parallel.workers = 1;
  parallel_for(queries.size(), cfg.parallel.workers, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) results[i] = search.run(queries[i], inner);
  });
  return results;
}

std::vector<DepthResult> depth_batch(const Matrix& queries, const Dataset& data, const RrsConfig& cfg) {
  std::vector<std::vector<double>> rows(queries.rows());
  for (std::size_t i = 0; i < queries.rows(); ++i) rows[i].assign(queries.row(i).begin(), queries.row(i).end());
  return depth_batch(rows, data, cfg);
}

}  // namespace depthforge
