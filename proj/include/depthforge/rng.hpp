#pragma once
// Counter-based random streams. A stream is fully determined by its key and
// counter prefix, so any number of workers can fill disjoint parts of an
// output without changing a single bit of it.

#include <array>
#include <cstdint>

namespace depthforge {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  [[nodiscard]] static Counter generate(Counter counter, Key key) noexcept;
};

/// Uniform random bit generator over one Philox stream. Counter words 0-1 hold
/// the stream index, word 2 the stream domain and word 3 the block counter.
class Substream {
 public:
  using result_type = std::uint64_t;

  Substream(std::uint64_t key, std::uint32_t domain, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

/// Stream for direction `index` of refinement `refinement`.
[[nodiscard]] Substream direction_stream(std::uint64_t seed, std::uint32_t refinement, std::uint64_t index) noexcept;

enum class StreamTag : std::uint32_t {
  gaussian_rows = 1,
  student_rows = 2,
  exponential_rows = 3,
  query_selection = 4,
  noise = 5,
};

/// Stream for row/item `index` of a data generator identified by `tag`.
[[nodiscard]] Substream tagged_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept;

/// Seed mixing (splitmix64 finalizer).
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t value) noexcept;

}  // namespace depthforge
