#pragma once

#include "steplab/policy.hpp"
#include "steplab/ppo.hpp"
#include "steplab/stepper_env.hpp"

namespace steplab {

struct RolloutOptions {
  bool stochastic = true;
  int max_ticks = 0;  // 0 = env tick budget only
};

/// Runs one episode to its end (failure, budget, or horizon) and packs the
/// experience tuples. Episodes that did not end in failure carry the final
/// observation for critic bootstrapping.
Episode run_episode(const PolicyBundle& policy, StepperEnv& env, Rng& rng,
                    const RolloutOptions& opts = {});

/// Keeps the first `ticks` samples of an episode, re-marking the cut as a
/// truncation with the next observation as bootstrap.
Episode trim_episode(const Episode& ep, int ticks);

}  // namespace steplab
