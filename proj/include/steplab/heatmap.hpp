#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "steplab/curriculum.hpp"
#include "steplab/param_grid.hpp"

namespace steplab {

/// Per-iteration heatmap CSV: one row per cell with the centered indices,
/// capability value (0 when absent), and sampling probability.
void write_heatmap_csv(std::ostream& os, const ParamGrid& grid, const GridDistribution& dist,
                       const std::optional<CapabilityGrid>& capability);

struct HeatmapData {
  int dims = 0;
  int resolution = 0;
  std::vector<double> capability;   // flat, row-major over centered indices
  std::vector<double> probability;
};

HeatmapData read_heatmap_csv(std::istream& is);

/// Renders a 2D heatmap CSV as an SVG grid (probability panel and capability
/// panel). Grids with more than two dims are skipped.
bool render_heatmap_svg(const HeatmapData& data, std::ostream& os);

/// Converts every heatmaps/iter_*.csv under run_dir into a sibling .svg.
/// Returns the number of images written.
int export_heatmaps(const std::string& run_dir);

}  // namespace steplab
