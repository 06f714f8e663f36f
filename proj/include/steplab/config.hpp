#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "steplab/curriculum.hpp"
#include "steplab/ppo.hpp"
#include "steplab/stepper_env.hpp"

namespace steplab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs; loadable from a sectioned key/value text file.
struct ExperimentConfig {
  // [run]
  std::uint64_t seed = 1;
  int iterations = 300;
  int workers = 1;
  int eval_cadence = 10;
  int eval_episodes = 16;
  int checkpoint_cadence = 50;
  int heatmap_cadence = 10;
  std::string out_dir = "runs/out";
  std::string init_checkpoint;

  // [grid]
  int grid_dims = 2;
  int grid_resolution = 11;
  StepBounds bounds;
  double r_uniform_lo = 0.65;  // r range when r is not a grid axis
  double r_uniform_hi = 0.8;

  // [curriculum]
  CurriculumConfig curriculum;

  // [env]
  EnvConfig env;

  // [sequence]
  SequenceConfig sequence;          // step_radius here is the evaluation radius
  double train_radius_scale = 5.0;  // training discs are this much wider

  // [rl]
  RlConfig rl;
  std::vector<int> hidden = {256, 256, 256, 256};

  double r_lo() const { return grid_dims >= 3 ? bounds.r_min : r_uniform_lo; }
  double r_hi() const { return grid_dims >= 3 ? bounds.r_max : r_uniform_hi; }
  double train_radius() const { return sequence.step_radius * train_radius_scale; }

  /// Throws ConfigError naming the offending key/value.
  void validate() const;
};

/// Parses `[section]` + `key = value` text (# comments). Unknown keys raise
/// ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical snapshot containing every key; parse_config(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a over the canonical snapshot.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace steplab
