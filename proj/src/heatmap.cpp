#include "steplab/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace steplab {

void write_heatmap_csv(std::ostream& os, const ParamGrid& grid, const GridDistribution& dist,
                       const std::optional<CapabilityGrid>& capability) {
  for (int d = 0; d < grid.dims(); ++d) os << 'i' << d << ',';
  os << "capability,probability\n";
  os.precision(17);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const ParamGrid::Index idx = grid.unflat(c);
    for (int d = 0; d < grid.dims(); ++d) os << idx[static_cast<std::size_t>(d)] << ',';
    os << (capability ? capability->value[c] : 0.0) << ',' << dist.mass[c] << '\n';
  }
}

HeatmapData read_heatmap_csv(std::istream& is) {
  HeatmapData data;
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("empty heatmap csv");
  data.dims = static_cast<int>(std::count(header.begin(), header.end(), ',')) - 1;
  if (data.dims < 1) throw std::runtime_error("malformed heatmap header: " + header);
  std::string line;
  int max_index = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    for (int d = 0; d < data.dims; ++d) {
      std::getline(ss, field, ',');
      max_index = std::max(max_index, std::abs(std::stoi(field)));
    }
    std::getline(ss, field, ',');
    data.capability.push_back(std::stod(field));
    std::getline(ss, field, ',');
    data.probability.push_back(std::stod(field));
  }
  data.resolution = 2 * max_index + 1;
  return data;
}

namespace {

// Perceptually-ordered 5-stop ramp, dark blue -> yellow.
void ramp(double t, int& r, int& g, int& b) {
  static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                     {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(static_cast<int>(t), 3);
  const double f = t - i;
  r = static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])));
  g = static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])));
  b = static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
}

void draw_panel(std::ostream& os, const std::vector<double>& values, int res, int x0,
                const char* title) {
  const int cell = 16;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (hi - lo < 1e-300) hi = lo + 1.0;
  os << "<text x=\"" << x0 << "\" y=\"14\" font-family=\"monospace\" font-size=\"12\">"
     << title << "</text>\n";
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const double v = values[static_cast<std::size_t>(row * res + col)];
      int r, g, b;
      ramp((v - lo) / (hi - lo), r, g, b);
      char rect[160];
      std::snprintf(rect, sizeof(rect),
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>\n",
                    x0 + col * cell, 20 + row * cell, cell - 1, cell - 1, r, g, b);
      os << rect;
    }
  }
}

}  // namespace

bool render_heatmap_svg(const HeatmapData& data, std::ostream& os) {
  if (data.dims != 2) return false;
  const int res = data.resolution;
  const int cell = 16;
  const int panel = res * cell + 24;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * panel << "\" height=\""
     << res * cell + 28 << "\">\n";
  draw_panel(os, data.probability, res, 4, "probability");
  draw_panel(os, data.capability, res, panel + 4, "capability");
  os << "</svg>\n";
  return true;
}

int export_heatmaps(const std::string& run_dir) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(run_dir) / "heatmaps";
  if (!fs::exists(dir)) return 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  int written = 0;
  for (const fs::path& p : files) {
    std::ifstream is(p);
    const HeatmapData data = read_heatmap_csv(is);
    if (data.dims != 2) continue;
    fs::path out = p;
    out.replace_extension(".svg");
    std::ofstream os(out);
    if (render_heatmap_svg(data, os)) ++written;
  }
  return written;
}

}  // namespace steplab
