#include "steplab/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace steplab {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Uniform: return "uniform";
    case Strategy::FixedOrder: return "fixed_order";
    case Strategy::FixedOrderBoundary: return "fixed_order_boundary";
    case Strategy::DifficultFavored: return "difficult_favored";
    case Strategy::Adaptive: return "adaptive";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
  for (Strategy s : {Strategy::Uniform, Strategy::FixedOrder, Strategy::FixedOrderBoundary,
                     Strategy::DifficultFavored, Strategy::Adaptive}) {
    if (name == strategy_name(s)) return s;
  }
  return std::nullopt;
}

GridDistribution adaptive_distribution(const CapabilityGrid& cap, const ParamGrid& grid,
                                       double k_sens, double beta) {
  if (cap.value.size() != grid.cell_count()) {
    throw std::invalid_argument("capability grid does not match the parameter grid");
  }
  const double c_max = *std::max_element(cap.value.begin(), cap.value.end());
  if (!(c_max > 0.0) || !std::isfinite(c_max)) return GridDistribution::uniform(grid);
  GridDistribution dist;
  dist.mass.resize(cap.value.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < cap.value.size(); ++i) {
    const double f = std::exp(-k_sens * std::abs(cap.value[i] / c_max - beta));
    dist.mass[i] = f;
    sum += f;
  }
  for (double& m : dist.mass) m /= sum;
  return dist;
}

CurriculumState initial_curriculum_state(const CurriculumConfig& cfg, const ParamGrid& grid) {
  CurriculumState state;
  state.stage = 1;
  switch (cfg.strategy) {
    case Strategy::Uniform:
    case Strategy::DifficultFavored:
    case Strategy::Adaptive:
      state.dist = GridDistribution::uniform(grid);
      break;
    case Strategy::FixedOrder:
      state.dist = GridDistribution::uniform_over(grid, grid.stage_subgrid(1));
      break;
    case Strategy::FixedOrderBoundary:
      state.dist = GridDistribution::uniform_over(grid, grid.stage_boundary(1));
      break;
  }
  return state;
}

CurriculumState next_distribution(const CurriculumConfig& cfg, const CurriculumState& state,
                                  const ParamGrid& grid, const IterationStats& stats) {
  CurriculumState next = state;
  const int last_stage =
      cfg.max_stage > 0 ? std::min(cfg.max_stage, grid.stage_count()) : grid.stage_count();
  switch (cfg.strategy) {
    case Strategy::Uniform:
      next.dist = GridDistribution::uniform(grid);
      break;
    case Strategy::FixedOrder:
    case Strategy::FixedOrderBoundary: {
      if (next.stage < last_stage && stats.avg_return >= cfg.reward_threshold) ++next.stage;
      const auto cells = cfg.strategy == Strategy::FixedOrder
                             ? grid.stage_subgrid(next.stage)
                             : grid.stage_boundary(next.stage);
      next.dist = GridDistribution::uniform_over(grid, cells);
      break;
    }
    case Strategy::DifficultFavored:
    case Strategy::Adaptive: {
      const double beta = cfg.strategy == Strategy::DifficultFavored ? 0.0 : cfg.beta;
      if (next.capability.has_value()) {
        next.dist = adaptive_distribution(*next.capability, grid, cfg.k_sens, beta);
      } else {
        next.dist = GridDistribution::uniform(grid);
      }
      break;
    }
  }
  return next;
}

StepSampler make_grid_sampler(const ParamGrid& grid, const GridDistribution& dist,
                              double r_lo, double r_hi) {
  auto sampler = std::make_shared<CellSampler>(dist);
  const bool draw_r = !grid.has_axis(ParamAxis::R);
  return [&grid, sampler, draw_r, r_lo, r_hi](Rng& rng) {
    StepParams p = grid.cell_params(sampler->sample(rng));
    if (draw_r) p.r = uniform_range(rng, r_lo, r_hi);
    return p;
  };
}

StepSampler make_stage1_sampler(const ParamGrid& grid, double r_lo, double r_hi) {
  const auto stage1 = grid.stage_subgrid(1);
  return make_grid_sampler(grid, GridDistribution::uniform_over(grid, stage1), r_lo, r_hi);
}

std::optional<CapabilityGrid> estimate_capability(const PolicyBundle& policy,
                                                  const ParamGrid& grid,
                                                  const CurriculumConfig& cfg,
                                                  const EnvConfig& env_cfg,
                                                  const SequenceConfig& seq_cfg,
                                                  double r_lo, double r_hi,
                                                  std::uint64_t seed) {
  // Keep the stage-1 subgrid storage alive for the sampler's lifetime.
  StepperEnv env(env_cfg, seq_cfg, make_stage1_sampler(grid, r_lo, r_hi));
  Rng rng = make_rng(seed, "capability");
  env.reset(rng);

  const std::size_t n_cells = grid.cell_count();
  std::vector<double> sum(n_cells, 0.0);
  int contacts_used = 0;

  const double r_nominal = 0.5 * (seq_cfg.bounds.r_min + seq_cfg.bounds.r_max);
  Eigen::MatrixXd imagined(StepperEnv::kObsDim, static_cast<Eigen::Index>(n_cells));

  while (contacts_used < cfg.eval_steps) {
    const StepResult result = env.step(policy.act_mean(env.observe()), rng);
    if (result.target_contact) {
      // Imagine both upcoming steps from the step just contacted: one
      // nominal delta(r, 0, 0), the other carrying each cell's parameters.
      const Step& base =
          env.sequence().steps[static_cast<std::size_t>(env.state().stance_step)];
      StepParams nominal;
      nominal.r = r_nominal;
      for (std::size_t c = 0; c < n_cells; ++c) {
        StepParams cell = grid.cell_params(c);
        if (!grid.has_axis(ParamAxis::R)) cell.r = r_nominal;
        Step first, second;
        if (cfg.vary_first_step) {
          first = place_step(base, cell);
          second = place_step(first, nominal);
        } else {
          first = place_step(base, nominal);
          second = place_step(first, cell);
        }
        imagined.col(static_cast<Eigen::Index>(c)) = env.observe_with_targets(first, second);
      }
      const Eigen::VectorXd values = policy.value_batch(imagined);
      for (std::size_t c = 0; c < n_cells; ++c) sum[c] += values[static_cast<Eigen::Index>(c)];
      ++contacts_used;
    }
    if (result.done) break;
  }

  if (contacts_used == 0) return std::nullopt;
  for (double& v : sum) v /= static_cast<double>(contacts_used);
  return CapabilityGrid{std::move(sum)};
}

}  // namespace steplab
