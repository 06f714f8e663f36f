#pragma once

#include <optional>
#include <string>

#include "steplab/param_grid.hpp"
#include "steplab/policy.hpp"
#include "steplab/stepper_env.hpp"

namespace steplab {

enum class Strategy { Uniform, FixedOrder, FixedOrderBoundary, DifficultFavored, Adaptive };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

struct CurriculumConfig {
  Strategy strategy = Strategy::FixedOrder;
  double reward_threshold = 2500.0;  // fixed-order stage advancement
  double beta = 0.9;                 // difficulty setpoint
  double k_sens = 10.0;              // capability sensitivity
  int eval_steps = 5;                // contacts per capability estimate
  bool vary_first_step = false;      // imagine the cell on the first step instead
  int max_stage = 0;                 // 0 = grid stage count
};

/// Estimated capability C per grid cell, in reward units.
struct CapabilityGrid {
  std::vector<double> value;
};

struct CurriculumState {
  int stage = 1;
  GridDistribution dist;
  std::optional<CapabilityGrid> capability;
};

struct IterationStats {
  double avg_return = 0.0;  // mean undiscounted return of episodes finished this iteration
};

/// Sampling mass proportional to exp(-k |C/C_max - beta|). Falls back to the
/// uniform distribution when C_max <= 0 (untrained or degenerate critic).
GridDistribution adaptive_distribution(const CapabilityGrid& cap, const ParamGrid& grid,
                                       double k_sens, double beta);

/// Advances the per-strategy state and emits the sampling distribution for
/// the next iteration. Adaptive strategies without a capability estimate fall
/// back to uniform for the iteration.
CurriculumState next_distribution(const CurriculumConfig& cfg, const CurriculumState& state,
                                  const ParamGrid& grid, const IterationStats& stats);

CurriculumState initial_curriculum_state(const CurriculumConfig& cfg, const ParamGrid& grid);

/// Step sampler that draws a grid cell from the distribution; when r is not a
/// grid axis it is drawn uniformly from [r_lo, r_hi].
StepSampler make_grid_sampler(const ParamGrid& grid, const GridDistribution& dist,
                              double r_lo, double r_hi);

/// Sampler for the easy (stage-1) terrain used by capability estimation and
/// pre-training.
StepSampler make_stage1_sampler(const ParamGrid& grid, double r_lo, double r_hi);

/// Walks the policy over stage-1 steps and, at each of the first
/// `cfg.eval_steps` target contacts, queries the critic on imagined
/// observations where one upcoming step is nominal and the other carries each
/// grid cell's parameters. Imagined steps never alter the physical sequence.
/// Returns nullopt when the episode ends before the first contact.
std::optional<CapabilityGrid> estimate_capability(const PolicyBundle& policy,
                                                  const ParamGrid& grid,
                                                  const CurriculumConfig& cfg,
                                                  const EnvConfig& env_cfg,
                                                  const SequenceConfig& seq_cfg,
                                                  double r_lo, double r_hi,
                                                  std::uint64_t seed);

}  // namespace steplab
