#include "depthforge/rng.hpp"

namespace depthforge {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

Philox4x32::Key split_key(std::uint64_t key) noexcept {
  return {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

Substream::Substream(std::uint64_t key, std::uint32_t domain, std::uint64_t index) noexcept
    : key_(split_key(key)),
      counter_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), domain, 0u} {}

Substream::result_type Substream::operator()() noexcept {
  if (used_ >= 4) {
    block_ = Philox4x32::generate(counter_, key_);
    ++counter_[3];
    used_ = 0;
  }
  const std::uint64_t lo = block_[used_];
  const std::uint64_t hi = block_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

std::uint64_t mix_seed(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Substream direction_stream(std::uint64_t seed, std::uint32_t refinement, std::uint64_t index) noexcept {
  return Substream(seed, refinement, index);
}

Substream tagged_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept {
  return Substream(mix_seed(seed ^ (static_cast<std::uint64_t>(tag) << 56)), 0xFFFF0000u | static_cast<std::uint32_t>(tag),
                   index);
}

}  // namespace depthforge
