#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "depthforge/matrix.hpp"
#include "depthforge/rng.hpp"

namespace depthforge {

/// A point on the unit sphere (norm 1 within 1e-12).
class Pole {
 public:
  explicit Pole(std::vector<double> coords);

  /// The first canonical basis vector e1 in `dim` dimensions.
  [[nodiscard]] static Pole axis(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

 private:
  std::vector<double> coords_;
};

/// Spherical cap of half-angle epsilon in (0, pi/2] around a pole.
struct CapSpec {
  Pole pole;
  double epsilon;
};

void validate_cap(const CapSpec& cap);

/// Fills `out` with a uniformly distributed direction on the unit sphere:
/// normalized i.i.d. standard normals, redrawn if all of them are zero.
void random_sphere(std::span<double> out, Substream& stream);
[[nodiscard]] std::vector<double> random_sphere(std::size_t dim, Substream& stream);

/// Draws a direction inside the cap. The polar angle is uniform on
/// [0, epsilon] around e1 (angle-uniform, not area-uniform); the result is then
/// carried onto the pole by a reflection that maps e1 to the pole.
void random_sphere_pole(const CapSpec& cap, Substream& stream, std::span<double> out);
[[nodiscard]] std::vector<double> random_sphere_pole(const CapSpec& cap, Substream& stream);

/// Applies the orthogonal map used by random_sphere_pole to carry e1 onto
/// `pole`. Exposed for testing.
void map_from_axis(std::span<const double> pole, std::span<double> u);

/// m x d directions; the rows were drawn from substreams keyed by
/// (seed, refinement, row index).
struct DirectionBatch {
  Matrix directions;
  std::uint64_t seed = 0;
  std::uint32_t refinement = 0;

  [[nodiscard]] std::size_t count() const noexcept { return directions.rows(); }
  [[nodiscard]] std::size_t dim() const noexcept { return directions.cols(); }
};

/// Wraps an explicit direction matrix (rows must be unit vectors).
[[nodiscard]] DirectionBatch make_batch(Matrix directions);

/// Generates m directions in the cap. The result does not depend on `workers`.
[[nodiscard]] DirectionBatch generate_batch(const CapSpec& cap, std::size_t m, std::uint64_t seed,
                                            std::uint32_t refinement, std::size_t workers = 1);

}  // namespace depthforge
