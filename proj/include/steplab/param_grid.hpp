#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "steplab/rng.hpp"
#include "steplab/step_world.hpp"

namespace steplab {

enum class ParamAxis { R, Psi, Theta, PhiX, PhiY };

const char* axis_name(ParamAxis a);

struct AxisSpec {
  ParamAxis axis;
  double min = 0.0;
  double max = 0.0;
};

/// (min, max) per active dimension, in canonical axis order.
struct GridBounds {
  std::vector<AxisSpec> axes;

  static GridBounds dims2(const StepBounds& b);  // psi, theta
  static GridBounds dims3(const StepBounds& b);  // r, psi, theta
  static GridBounds dims5(const StepBounds& b);  // r, psi, theta, phi_x, phi_y
  static GridBounds with_dims(int dims, const StepBounds& b);
};

/// Evenly discretized step-parameter space. Centered integer indices in
/// [-h, h] per dimension, h = (resolution-1)/2; index 0 maps to the midpoint
/// of each dimension. Resolution must be odd.
class ParamGrid {
 public:
  using Index = std::array<int, 5>;  // first dims() entries meaningful

  ParamGrid(GridBounds bounds, int resolution = 11, StepParams base = {});

  int dims() const { return static_cast<int>(bounds_.axes.size()); }
  int resolution() const { return resolution_; }
  int half_span() const { return (resolution_ - 1) / 2; }
  std::size_t cell_count() const { return cell_count_; }
  const GridBounds& bounds() const { return bounds_; }
  bool has_axis(ParamAxis a) const;
  double spacing(int dim) const;

  std::size_t flat(const Index& idx) const;
  Index unflat(std::size_t flat) const;

  /// Parameters at a grid point. Inactive dimensions take `base` values.
  /// Throws std::out_of_range when any index exceeds the half span.
  StepParams cell_params(const Index& idx) const;
  StepParams cell_params(std::size_t flat) const;

  /// Number of fixed-order stages until the subgrid covers the full grid.
  int stage_count() const { return half_span() + 1; }

  /// Centered (2k-1)-wide windows for psi/theta; the r window grows
  /// one-sidedly from r_min by two points per stage; phi axes are not under
  /// stage control and always span the full range. Returns sorted flat ids.
  std::vector<std::size_t> stage_subgrid(int k) const;

  /// stage_subgrid(k) minus stage_subgrid(k-1); the center cell for k = 1.
  std::vector<std::size_t> stage_boundary(int k) const;

 private:
  std::pair<int, int> axis_window(ParamAxis axis, int k) const;

  GridBounds bounds_;
  int resolution_;
  StepParams base_;
  std::size_t cell_count_;
};

/// Probability mass per grid cell, aligned with the grid's flat ordering.
struct GridDistribution {
  std::vector<double> mass;

  static GridDistribution uniform(const ParamGrid& grid);
  static GridDistribution uniform_over(const ParamGrid& grid, std::span<const std::size_t> cells);

  bool valid(double tol = 1e-9) const;
};

/// Draws a flat cell id with probability mass[id]; inverse-CDF over a single
/// uniform draw so results depend only on the rng state.
std::size_t sample_cell(const GridDistribution& dist, Rng& rng);

/// Precomputed CDF for repeated draws from one distribution.
class CellSampler {
 public:
  explicit CellSampler(const GridDistribution& dist);
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

/// CSV rows `i_0,...,i_{d-1},probability` (centered indices).
void write_distribution_csv(std::ostream& os, const ParamGrid& grid, const GridDistribution& dist);

}  // namespace steplab
