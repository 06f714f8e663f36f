#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "steplab/geometry.hpp"
#include "steplab/step_world.hpp"

namespace steplab {

/// Regular elevation grid with bilinear interpolation. Row-major storage,
/// x along columns, y along rows.
class HeightField {
 public:
  HeightField() = default;
  HeightField(int nx, int ny, double cell_size, Vec2 origin = {0.0, 0.0});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return cell_size_; }
  const Vec2& origin() const { return origin_; }

  double at(int ix, int iy) const;
  void set(int ix, int iy, double z);

  /// Bilinear sample; queries outside the covered rectangle are clamped to it.
  double sample(double x, double y) const;
  /// Analytic gradient of the bilinear patch at (x, y).
  Vec2 gradient(double x, double y) const;

  /// Binary grid file: header (magic, dims, cell size, origin) + row-major
  /// 32-bit float payload.
  void save_binary(std::ostream& os) const;
  static HeightField load_binary(std::istream& is);
  void save_ascii(std::ostream& os) const;

  std::uint64_t content_hash() const;

 private:
  int nx_ = 0, ny_ = 0;
  double cell_size_ = 1.0;
  Vec2 origin_{0.0, 0.0};
  std::vector<double> data_;  // file payload is f32; kept at full precision here
};

/// Classic Perlin gradient noise with fBm octaves (gain 0.5, lacunarity 2),
/// scaled so the result lies within +-amplitude. Deterministic in seed.
HeightField perlin_heightfield(std::uint64_t seed, int nx, int ny, double cell_size,
                               double amplitude, double frequency, int octaves);

struct FootstepPlan {
  Vec2 start{0.0, 0.0};
  double start_heading = 0.0;
  int n_steps = 50;
  double step_length = 0.7;
  double turn_per_step = deg2rad(5.0);
  double step_radius = 0.25;
  double start_offset_z = -0.01;
  double foot_spacing = 0.2;
};

/// Synthesizes a planar footstep trajectory turning `turn_per_step` each
/// step and projects it onto the field: step z from the field sample, surface
/// roll/pitch from the field gradient rotated into the step frame. The two
/// start-feet steps are prepended, so the result drops into the env directly.
StepSequence project_footsteps(const HeightField& field, const FootstepPlan& plan);

}  // namespace steplab
