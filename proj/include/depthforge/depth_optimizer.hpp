#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "depthforge/matrix.hpp"
#include "depthforge/projection_engine.hpp"
#include "depthforge/simd/kernels.hpp"
#include "depthforge/timing.hpp"
#include "depthforge/univariate_depth.hpp"

namespace depthforge {

/// When the pole moves within a refinement. Both rules pick the lowest-index
/// direction among those attaining the refinement minimum, so they agree on
/// every input; the switch keeps both formulations available.
enum class PoleUpdate { per_refinement, per_direction };

struct RrsConfig {
  std::size_t total_directions = 100'000;  // k
  std::size_t refinements = 40;            // r
  double shrink = 0.9;                     // alpha
  DepthNotion notion = DepthNotion::projection;
  std::uint64_t seed = 0;
  ParallelConfig parallel{};
  PoleUpdate pole_update = PoleUpdate::per_refinement;

  /// m = ceil(k / r).
  [[nodiscard]] std::size_t directions_per_refinement() const noexcept {
    return (total_directions + refinements - 1) / refinements;
  }
};

void validate(const RrsConfig& cfg);

struct TraceEntry {
  double best;                 // running minimum after this refinement
  double epsilon;              // cap half-angle used
  std::vector<double> pole;    // cap centre used

  bool operator==(const TraceEntry&) const = default;
};

struct DepthResult {
  double depth = 1.0;
  std::vector<double> argmin_direction;
  std::vector<TraceEntry> trace;
  std::size_t directions_used = 0;

  bool operator==(const DepthResult&) const = default;
};

struct Incumbent {
  double depth;
  std::vector<double> pole;
};

/// Replaces the incumbent only when the candidate is strictly smaller.
[[nodiscard]] Incumbent pole_update_rule(const Incumbent& current, double candidate_depth,
                                         std::span<const double> candidate_direction);

/// Refined random search against one dataset. Holds a packed copy of the data
/// so repeated searches (several queries, several refinements) skip the
/// transpose. The dataset must outlive the object.
class DepthSearch {
 public:
  explicit DepthSearch(const Dataset& data);

  [[nodiscard]] const Dataset& data() const noexcept { return *data_; }

  /// Massively-parallel path: per refinement, generate all m directions,
  /// project the data on the tile grid, then evaluate the m univariate depths.
  [[nodiscard]] DepthResult run(std::span<const double> z, const RrsConfig& cfg, PhaseTimes* times = nullptr) const;

  /// Classical path: one direction at a time, generated, projected with a
  /// plain loop and evaluated before the next. Single worker, scalar kernels.
  /// Produces the same result as run().
  [[nodiscard]] DepthResult run_sequential(std::span<const double> z, const RrsConfig& cfg,
                                           PhaseTimes* times = nullptr) const;

  /// Univariate depth of z along each row of `directions`.
  [[nodiscard]] std::vector<double> directional_depths(std::span<const double> z, const Matrix& directions,
                                                       DepthNotion notion, const ParallelConfig& par) const;

 private:
  const Dataset* data_;
  PackedDataset packed_;
  const simd::KernelTable* kernels_;
};

/// Minimum over k directions of a single hemispherical cap around e1; the same
/// search as refined_random_search with r = 1.
[[nodiscard]] DepthResult simple_random_search(std::span<const double> z, const Dataset& data, std::size_t k,
                                               DepthNotion notion, std::uint64_t seed);

[[nodiscard]] DepthResult refined_random_search(std::span<const double> z, const Dataset& data,
                                                const RrsConfig& cfg);

[[nodiscard]] DepthResult refined_random_search(std::span<const double> z, const Dataset& data, const RrsConfig& cfg,
                                                ExecPath path, PhaseTimes& times);

/// One search per query, all with cfg.seed, run concurrently over queries.
/// Element i equals refined_random_search(queries[i], data, cfg).
[[nodiscard]] std::vector<DepthResult> depth_batch(const std::vector<std::vector<double>>& queries,
                                                   const Dataset& data, const RrsConfig& cfg);
[[nodiscard]] std::vector<DepthResult> depth_batch(const Matrix& queries, const Dataset& data, const RrsConfig& cfg);

}  // namespace depthforge
