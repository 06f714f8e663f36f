#include "steplab/param_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace steplab {

const char* axis_name(ParamAxis a) {
  switch (a) {
    case ParamAxis::R: return "r";
    case ParamAxis::Psi: return "psi";
    case ParamAxis::Theta: return "theta";
    case ParamAxis::PhiX: return "phi_x";
    case ParamAxis::PhiY: return "phi_y";
  }
  return "?";
}

GridBounds GridBounds::dims2(const StepBounds& b) {
  return {{{ParamAxis::Psi, -b.psi_max, b.psi_max},
           {ParamAxis::Theta, -b.theta_max, b.theta_max}}};
}

GridBounds GridBounds::dims3(const StepBounds& b) {
  return {{{ParamAxis::R, b.r_min, b.r_max},
           {ParamAxis::Psi, -b.psi_max, b.psi_max},
           {ParamAxis::Theta, -b.theta_max, b.theta_max}}};
}

GridBounds GridBounds::dims5(const StepBounds& b) {
  GridBounds g = dims3(b);
  g.axes.push_back({ParamAxis::PhiX, -b.phi_max, b.phi_max});
  g.axes.push_back({ParamAxis::PhiY, -b.phi_max, b.phi_max});
  return g;
}

GridBounds GridBounds::with_dims(int dims, const StepBounds& b) {
  switch (dims) {
    case 2: return dims2(b);
    case 3: return dims3(b);
    case 5: return dims5(b);
    default: throw std::invalid_argument("grid dims must be 2, 3, or 5");
  }
}

ParamGrid::ParamGrid(GridBounds bounds, int resolution, StepParams base)
    : bounds_(std::move(bounds)), resolution_(resolution), base_(base) {
  if (resolution_ < 3 || resolution_ % 2 == 0) {
    throw std::invalid_argument("grid resolution must be odd and >= 3");
  }
  for (const AxisSpec& ax : bounds_.axes) {
    if (!(ax.min < ax.max)) throw std::invalid_argument("grid bounds need min < max");
  }
  const int d = dims();
  if (d != 2 && d != 3 && d != 5) throw std::invalid_argument("grid dims must be 2, 3, or 5");
  cell_count_ = 1;
  for (int i = 0; i < d; ++i) cell_count_ *= static_cast<std::size_t>(resolution_);
}

bool ParamGrid::has_axis(ParamAxis a) const {
  return std::any_of(bounds_.axes.begin(), bounds_.axes.end(),
                     [a](const AxisSpec& s) { return s.axis == a; });
}

double ParamGrid::spacing(int dim) const {
  const AxisSpec& ax = bounds_.axes[static_cast<std::size_t>(dim)];
  return (ax.max - ax.min) / static_cast<double>(resolution_ - 1);
}

std::size_t ParamGrid::flat(const Index& idx) const {
  const int h = half_span();
  std::size_t f = 0;
  for (int d = 0; d < dims(); ++d) {
    const int i = idx[static_cast<std::size_t>(d)];
    if (i < -h || i > h) throw std::out_of_range("grid index out of range");
    f = f * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(i + h);
  }
  return f;
}

ParamGrid::Index ParamGrid::unflat(std::size_t flat) const {
  if (flat >= cell_count_) throw std::out_of_range("flat cell id out of range");
  Index idx{0, 0, 0, 0, 0};
  const int h = half_span();
  for (int d = dims() - 1; d >= 0; --d) {
    idx[static_cast<std::size_t>(d)] =
        static_cast<int>(flat % static_cast<std::size_t>(resolution_)) - h;
    flat /= static_cast<std::size_t>(resolution_);
  }
  return idx;
}

StepParams ParamGrid::cell_params(const Index& idx) const {
  const int h = half_span();
  StepParams p = base_;
  for (int d = 0; d < dims(); ++d) {
    const int i = idx[static_cast<std::size_t>(d)];
    if (i < -h || i > h) throw std::out_of_range("grid index out of range");
    const AxisSpec& ax = bounds_.axes[static_cast<std::size_t>(d)];
    const double mid = 0.5 * (ax.min + ax.max);
    const double value = mid + spacing(d) * static_cast<double>(i);
    switch (ax.axis) {
      case ParamAxis::R: p.r = value; break;
      case ParamAxis::Psi: p.psi = value; break;
      case ParamAxis::Theta: p.theta = value; break;
      case ParamAxis::PhiX: p.phi_x = value; break;
      case ParamAxis::PhiY: p.phi_y = value; break;
    }
  }
  return p;
}

StepParams ParamGrid::cell_params(std::size_t flat) const { return cell_params(unflat(flat)); }

std::pair<int, int> ParamGrid::axis_window(ParamAxis axis, int k) const {
  const int h = half_span();
  switch (axis) {
    case ParamAxis::Psi:
    case ParamAxis::Theta: {
      const int w = std::min(k - 1, h);
      return {-w, w};
    }
    case ParamAxis::R:
      // Grows one-sidedly from r_min, two grid points per stage.
      return {-h, std::min(-h + 2 * (k - 1), h)};
    case ParamAxis::PhiX:
    case ParamAxis::PhiY:
      return {-h, h};  // not under stage control
  }
  return {-h, h};
}

std::vector<std::size_t> ParamGrid::stage_subgrid(int k) const {
  if (k < 1 || k > stage_count()) throw std::out_of_range("stage out of range");
  std::array<std::pair<int, int>, 5> win{};
  for (int d = 0; d < dims(); ++d) {
    win[static_cast<std::size_t>(d)] = axis_window(bounds_.axes[static_cast<std::size_t>(d)].axis, k);
  }
  std::vector<std::size_t> cells;
  Index idx{0, 0, 0, 0, 0};
  // Odometer over the per-axis windows; emits flat ids in ascending order.
  for (int d = 0; d < dims(); ++d) idx[static_cast<std::size_t>(d)] = win[static_cast<std::size_t>(d)].first;
  while (true) {
    cells.push_back(flat(idx));
    int d = dims() - 1;
    while (d >= 0) {
      auto& i = idx[static_cast<std::size_t>(d)];
      if (++i <= win[static_cast<std::size_t>(d)].second) break;
      i = win[static_cast<std::size_t>(d)].first;
      --d;
    }
    if (d < 0) break;
  }
  return cells;
}

std::vector<std::size_t> ParamGrid::stage_boundary(int k) const {
  std::vector<std::size_t> outer = stage_subgrid(k);
  if (k == 1) return outer;
  std::vector<std::size_t> inner = stage_subgrid(k - 1);
  std::vector<std::size_t> ring;
  std::set_difference(outer.begin(), outer.end(), inner.begin(), inner.end(),
                      std::back_inserter(ring));
  return ring;
}

GridDistribution GridDistribution::uniform(const ParamGrid& grid) {
  GridDistribution d;
  d.mass.assign(grid.cell_count(), 1.0 / static_cast<double>(grid.cell_count()));
  return d;
}

GridDistribution GridDistribution::uniform_over(const ParamGrid& grid,
                                                std::span<const std::size_t> cells) {
  if (cells.empty()) throw std::invalid_argument("uniform_over needs a non-empty cell set");
  GridDistribution d;
  d.mass.assign(grid.cell_count(), 0.0);
  const double p = 1.0 / static_cast<double>(cells.size());
  for (std::size_t c : cells) d.mass.at(c) = p;
  return d;
}

bool GridDistribution::valid(double tol) const {
  double sum = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) return false;
    sum += m;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::size_t sample_cell(const GridDistribution& dist, Rng& rng) {
  if (!dist.valid()) throw std::invalid_argument("sample_cell: invalid distribution");
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < dist.mass.size(); ++i) {
    if (dist.mass[i] <= 0.0) continue;
    acc += dist.mass[i];
    last = i;
    if (u < acc) return i;
  }
  return last;  // u landed in the rounding tail
}

CellSampler::CellSampler(const GridDistribution& dist) {
  if (!dist.valid()) throw std::invalid_argument("CellSampler: invalid distribution");
  cdf_.resize(dist.mass.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.mass.size(); ++i) {
    acc += dist.mass[i];
    cdf_[i] = acc;
  }
  cdf_.back() = 1.0;
}

std::size_t CellSampler::sample(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::size_t>(std::distance(cdf_.begin(), it));
}

void write_distribution_csv(std::ostream& os, const ParamGrid& grid,
                            const GridDistribution& dist) {
  for (int d = 0; d < grid.dims(); ++d) {
    os << 'i' << d << ',';
  }
  os << "probability\n";
  os.precision(17);
  for (std::size_t c = 0; c < dist.mass.size(); ++c) {
    const ParamGrid::Index idx = grid.unflat(c);
    for (int d = 0; d < grid.dims(); ++d) os << idx[static_cast<std::size_t>(d)] << ',';
    os << dist.mass[c] << '\n';
  }
}

}  // namespace steplab
