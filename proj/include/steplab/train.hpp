#pragma once

#include <string>

#include "steplab/checkpoint.hpp"
#include "steplab/config.hpp"
#include "steplab/evals.hpp"

namespace steplab {

struct TrainResult {
  std::string run_dir;
  std::string final_checkpoint;
  int iterations = 0;
  int final_stage = 1;
  EvalStats final_eval;  // uniform sampling over the full grid
};

/// Runs the training loop: capability estimation (adaptive strategies),
/// curriculum distribution update, deterministic parallel rollouts, PPO
/// update, logging, and checkpoints. The run directory receives a config
/// snapshot, iterations.csv, timing.csv, heatmap CSVs, and checkpoints;
/// iterations.csv is byte-identical across reruns regardless of worker count.
TrainResult train(const ExperimentConfig& cfg);

/// Deterministic per-episode rollout collection totalling exactly
/// `budget` ticks (the final episode is trimmed); exposed for tests.
std::vector<Episode> collect_rollouts(const PolicyBundle& policy, const ExperimentConfig& cfg,
                                      const ParamGrid& grid, const GridDistribution& dist,
                                      int budget, int workers, std::uint64_t seed,
                                      std::uint64_t iteration);

}  // namespace steplab
