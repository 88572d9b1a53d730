#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "depthforge/perf_model.hpp"
#include "depthforge/timing.hpp"
#include "depthforge/univariate_depth.hpp"

namespace depthforge::study {

struct BenchOptions {
  ExecPath path = ExecPath::parallel;
  DepthNotion notion = DepthNotion::projection;
  /// Timed repetitions per cell after one discarded warm-up run.
  std::size_t repeats = 5;
  std::size_t workers = 1;
  std::size_t d_chunk = 256;
  double shrink = 0.9;
  std::uint64_t seed = 1;
};

/// Times the three phases of a search on a Toeplitz Gaussian dataset of each
/// workload's shape. Each phase (and the total) is the median over repeats.
/// Runs never overlap; repeats cycle through the cells so that drift in
/// machine speed is shared evenly between them.
[[nodiscard]] std::vector<TimingProfile> breakdown_bench(const std::vector<Workload>& workloads,
                                                         const BenchOptions& opt);

/// Columns n,d,k,r,g,d_chunk,lambda,path,phase,seconds,fraction,total_seconds;
/// one row per phase.
void write_breakdown_csv(std::ostream& out, const std::vector<TimingProfile>& profiles);

/// Reads profiles written by write_breakdown_csv.
[[nodiscard]] std::vector<TimingProfile> read_breakdown_csv(const std::string& path);

struct RuntimeCell {
  std::size_t d;
  std::size_t k;
  std::size_t n;
  std::size_t r;
  double seconds;  // median total
};

[[nodiscard]] std::vector<RuntimeCell> runtime_grid(const std::vector<std::size_t>& dims,
                                                    const std::vector<std::size_t>& directions, std::size_t n,
                                                    std::size_t r, const BenchOptions& opt);

/// Columns d,k,n,r,notion,path,seconds.
void write_runtime_csv(std::ostream& out, const std::vector<RuntimeCell>& cells, const BenchOptions& opt);

}  // namespace depthforge::study
