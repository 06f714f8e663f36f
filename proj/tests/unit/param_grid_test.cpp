#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "steplab/param_grid.hpp"

using namespace steplab;

namespace {

ParamGrid grid2d() { return ParamGrid(GridBounds::dims2(StepBounds{}), 11); }

}  // namespace

TEST_CASE("cell_params midpoint and extremes") {
  const ParamGrid grid = grid2d();
  StepParams center = grid.cell_params(ParamGrid::Index{0, 0, 0, 0, 0});
  CHECK(center.psi == doctest::Approx(0.0));
  CHECK(center.theta == doctest::Approx(0.0));

  StepParams corner = grid.cell_params(ParamGrid::Index{5, 5, 0, 0, 0});
  CHECK(corner.psi == doctest::Approx(deg2rad(20.0)));
  CHECK(corner.theta == doctest::Approx(deg2rad(50.0)));

  StepParams edge = grid.cell_params(ParamGrid::Index{-5, 0, 0, 0, 0});
  CHECK(edge.psi == doctest::Approx(deg2rad(-20.0)));
  CHECK(edge.theta == doctest::Approx(0.0));

  // spacing: 4 deg per psi cell, 10 deg per theta cell
  StepParams one = grid.cell_params(ParamGrid::Index{1, 1, 0, 0, 0});
  CHECK(one.psi == doctest::Approx(deg2rad(4.0)));
  CHECK(one.theta == doctest::Approx(deg2rad(10.0)));

  CHECK_THROWS_AS(grid.cell_params(ParamGrid::Index{6, 0, 0, 0, 0}), std::out_of_range);
}

TEST_CASE("cell_params is injective and spans the bounds") {
  const ParamGrid grid = grid2d();
  std::set<std::pair<double, double>> seen;
  double psi_min = 1e9, psi_max = -1e9, theta_min = 1e9, theta_max = -1e9;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const StepParams p = grid.cell_params(c);
    seen.insert({p.psi, p.theta});
    psi_min = std::min(psi_min, p.psi);
    psi_max = std::max(psi_max, p.psi);
    theta_min = std::min(theta_min, p.theta);
    theta_max = std::max(theta_max, p.theta);
  }
  CHECK(seen.size() == grid.cell_count());
  CHECK(psi_min == doctest::Approx(-deg2rad(20.0)));
  CHECK(psi_max == doctest::Approx(deg2rad(20.0)));
  CHECK(theta_min == doctest::Approx(-deg2rad(50.0)));
  CHECK(theta_max == doctest::Approx(deg2rad(50.0)));
}

TEST_CASE("stage subgrids") {
  const ParamGrid grid = grid2d();
  CHECK(grid.stage_count() == 6);

  const auto stage1 = grid.stage_subgrid(1);
  REQUIRE(stage1.size() == 1);
  CHECK(grid.unflat(stage1[0]) == ParamGrid::Index{0, 0, 0, 0, 0});

  CHECK(grid.stage_subgrid(2).size() == 9);
  CHECK(grid.stage_subgrid(6).size() == 121);

  for (std::size_t c : grid.stage_subgrid(2)) {
    const auto idx = grid.unflat(c);
    CHECK(std::abs(idx[0]) <= 1);
    CHECK(std::abs(idx[1]) <= 1);
  }

  CHECK_THROWS_AS(grid.stage_subgrid(0), std::out_of_range);
  CHECK_THROWS_AS(grid.stage_subgrid(7), std::out_of_range);
}

TEST_CASE("subgrid monotonicity and boundary partition") {
  const ParamGrid grid = grid2d();
  std::vector<std::size_t> prev;
  std::set<std::size_t> all_boundaries;
  std::size_t boundary_total = 0;
  for (int k = 1; k <= grid.stage_count(); ++k) {
    const auto sub = grid.stage_subgrid(k);
    CHECK(std::includes(sub.begin(), sub.end(), prev.begin(), prev.end()));
    prev = sub;
    const auto ring = grid.stage_boundary(k);
    boundary_total += ring.size();
    for (std::size_t c : ring) {
      CHECK(all_boundaries.insert(c).second);  // pairwise disjoint
    }
  }
  CHECK(boundary_total == grid.cell_count());  // rings partition the grid
  CHECK(grid.stage_boundary(1).size() == 1);
  CHECK(grid.stage_boundary(2).size() == 8);
  CHECK(grid.stage_boundary(6).size() == 40);
}

TEST_CASE("3D grid r-dimension grows one-sidedly from r_min") {
  const ParamGrid grid(GridBounds::dims3(StepBounds{}), 11);
  CHECK(grid.stage_count() == 6);
  const auto stage1 = grid.stage_subgrid(1);
  REQUIRE(stage1.size() == 1);
  const StepParams p = grid.cell_params(stage1[0]);
  CHECK(p.r == doctest::Approx(0.65));  // starts at r_min
  CHECK(p.psi == doctest::Approx(0.0));

  // stage 2 expands r by two grid points and psi/theta by one each side
  const auto stage2 = grid.stage_subgrid(2);
  CHECK(stage2.size() == 3 * 3 * 3);
  double r_max_seen = 0.0;
  for (std::size_t c : stage2) r_max_seen = std::max(r_max_seen, grid.cell_params(c).r);
  CHECK(r_max_seen == doctest::Approx(0.65 + 2 * 0.085));
  CHECK(grid.stage_subgrid(6).size() == 11 * 11 * 11);
}

TEST_CASE("5D fixed-order stages leave the tilt axes uncontrolled") {
  const ParamGrid grid(GridBounds::dims5(StepBounds{}), 5);
  const auto stage1 = grid.stage_subgrid(1);
  CHECK(stage1.size() == 5 * 5);  // full phi_x x phi_y plane at the center cell
  for (std::size_t c : stage1) {
    const auto idx = grid.unflat(c);
    CHECK(idx[0] == -2);  // r at r_min
    CHECK(idx[1] == 0);
    CHECK(idx[2] == 0);
  }
}

TEST_CASE("uniform distributions") {
  const ParamGrid grid = grid2d();
  const GridDistribution uniform = GridDistribution::uniform(grid);
  CHECK(uniform.valid());
  for (double m : uniform.mass) CHECK(m == doctest::Approx(1.0 / 121.0));

  const auto ring = grid.stage_boundary(3);
  const GridDistribution over = GridDistribution::uniform_over(grid, ring);
  CHECK(over.valid());
  double sum = 0.0;
  for (std::size_t c : ring) {
    CHECK(over.mass[c] == doctest::Approx(1.0 / static_cast<double>(ring.size())));
    sum += over.mass[c];
  }
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("sample_cell point mass and determinism") {
  const ParamGrid grid = grid2d();
  GridDistribution point;
  point.mass.assign(grid.cell_count(), 0.0);
  const std::size_t target = grid.flat(ParamGrid::Index{0, 0, 0, 0, 0});
  point.mass[target] = 1.0;
  Rng rng(42);
  for (int i = 0; i < 100; ++i) CHECK(sample_cell(point, rng) == target);

  Rng a(7), b(7);
  const GridDistribution uniform = GridDistribution::uniform(grid);
  for (int i = 0; i < 50; ++i) CHECK(sample_cell(uniform, a) == sample_cell(uniform, b));

  GridDistribution bad;
  bad.mass.assign(grid.cell_count(), 1.0);  // unnormalized
  CHECK_THROWS_AS(sample_cell(bad, rng), std::invalid_argument);
}

TEST_CASE("uniform sampling frequencies within binomial bounds") {
  const ParamGrid grid = grid2d();
  const GridDistribution uniform = GridDistribution::uniform(grid);
  const CellSampler sampler(uniform);
  Rng rng(2024);
  const int n = 1000000;
  std::vector<int> counts(grid.cell_count(), 0);
  for (int i = 0; i < n; ++i) ++counts[sampler.sample(rng)];
  const double p = 1.0 / static_cast<double>(grid.cell_count());
  const double sigma = std::sqrt(n * p * (1.0 - p));
  for (int c : counts) {
    CHECK(std::abs(c - n * p) <= 5.0 * sigma);  // generous 5-sigma bound
  }
}

TEST_CASE("distribution CSV export") {
  const ParamGrid grid(GridBounds::dims2(StepBounds{}), 3);
  const GridDistribution uniform = GridDistribution::uniform(grid);
  std::stringstream ss;
  write_distribution_csv(ss, grid, uniform);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "i0,i1,probability");
  int rows = 0;
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 9);
}
