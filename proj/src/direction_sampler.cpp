#include "depthforge/direction_sampler.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "depthforge/error.hpp"
#include "depthforge/parallel.hpp"

namespace depthforge {
namespace {

constexpr double kUnitTolerance = 1e-12;

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

Pole::Pole(std::vector<double> coords) : coords_(std::move(coords)) {
  require(!coords_.empty(), ErrorKind::invalid_argument, "pole must have at least one coordinate");
  const double norm = std::sqrt(squared_norm(coords_));
  require(std::abs(norm - 1.0) <= kUnitTolerance, ErrorKind::invalid_argument,
          "pole is not a unit vector (norm " + std::to_string(norm) + ")");
}

Pole Pole::axis(std::size_t dim) {
  require(dim >= 1, ErrorKind::invalid_argument, "dimension must be positive");
  std::vector<double> e1(dim, 0.0);
  e1[0] = 1.0;
  return Pole(std::move(e1));
}

void validate_cap(const CapSpec& cap) {
  require(cap.epsilon > 0.0 && cap.epsilon <= std::numbers::pi / 2, ErrorKind::invalid_argument,
          "cap half-angle must lie in (0, pi/2], got " + std::to_string(cap.epsilon));
}

void random_sphere(std::span<double> out, Substream& stream) {
  require(!out.empty(), ErrorKind::invalid_argument, "random_sphere needs d >= 1");
  std::normal_distribution<double> normal;
  double s = 0.0;
  do {
    s = 0.0;
    for (double& x : out) {
      x = normal(stream);
      s += x * x;
    }
  } while (s == 0.0);
  if (out.size() == 1) {
    out[0] = std::copysign(1.0, out[0]);
    return;
  }
  const double inv = 1.0 / std::sqrt(s);
  for (double& x : out) x *= inv;
}

std::vector<double> random_sphere(std::size_t dim, Substream& stream) {
  require(dim >= 1, ErrorKind::invalid_argument, "random_sphere needs d >= 1");
  std::vector<double> u(dim);
  random_sphere(u, stream);
  return u;
}

// Carries e1 onto the pole. Away from e1 this is the reflection across the
// hyperplane orthogonal to e1 - p, i.e. u + lambda (e1 - p) with
// lambda = (p.u - u1) / (1 - p1). Within 1e-6 of e1 that reflection loses
// accuracy (its normal vanishes), so there we use the reflection across
// e1 + p followed by negation, which also maps e1 to p.
void map_from_axis(std::span<const double> p, std::span<double> u) {
  const std::size_t d = p.size();
  const double gap = 1.0 - p[0];
  double tail = 0.0;
  for (std::size_t i = 1; i < d; ++i) tail += p[i] * p[i];
  if (gap == 0.0 && tail == 0.0) return;

  const double sign = gap >= 1e-6 ? -1.0 : 1.0;  // v = e1 + sign * p
  const double v0 = 1.0 + sign * p[0];
  double vv = v0 * v0;
  double vu = v0 * u[0];
  for (std::size_t i = 1; i < d; ++i) {
    vv += p[i] * p[i];
    vu += sign * p[i] * u[i];
  }
  const double f = 2.0 * vu / vv;
  u[0] -= f * v0;
  for (std::size_t i = 1; i < d; ++i) u[i] -= f * sign * p[i];
  if (sign > 0.0) {
    for (double& x : u) x = -x;
  }
}

void random_sphere_pole(const CapSpec& cap, Substream& stream, std::span<double> out) {
  validate_cap(cap);
  const std::span<const double> p = cap.pole.coords();
  require(out.size() == p.size(), ErrorKind::dimension_mismatch, "output size does not match pole dimension");
  if (p.size() == 1) {
    out[0] = p[0];
    return;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double theta = unit(stream) * cap.epsilon;
  out[0] = std::cos(theta);
  const double radius = std::sin(theta);  // == sqrt(1 - cos^2) on [0, pi/2]
  random_sphere(out.subspan(1), stream);
  for (std::size_t i = 1; i < out.size(); ++i) out[i] *= radius;
  map_from_axis(p, out);
}

std::vector<double> random_sphere_pole(const CapSpec& cap, Substream& stream) {
  std::vector<double> u(cap.pole.dim());
  random_sphere_pole(cap, stream, u);
  return u;
}

DirectionBatch make_batch(Matrix directions) {
  require(directions.rows() >= 1 && directions.cols() >= 1, ErrorKind::invalid_argument,
          "direction batch must be non-empty");
  for (std::size_t j = 0; j < directions.rows(); ++j) {
    const double norm = std::sqrt(squared_norm(directions.row(j)));
    require(std::abs(norm - 1.0) <= 1e-10, ErrorKind::invalid_argument,
            "direction " + std::to_string(j) + " is not a unit vector");
  }
  return DirectionBatch{std::move(directions), 0, 0};
}

DirectionBatch generate_batch(const CapSpec& cap, std::size_t m, std::uint64_t seed, std::uint32_t refinement,
                              std::size_t workers) {
  validate_cap(cap);
  require(m >= 1, ErrorKind::invalid_argument, "direction count must be positive");
  DirectionBatch batch{Matrix(m, cap.pole.dim()), seed, refinement};
  parallel_for(m, workers, 64, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      Substream stream = direction_stream(seed, refinement, j);
      random_sphere_pole(cap, stream, batch.directions.row(j));
    }
  });
  return batch;
}

}  // namespace depthforge
