#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "steplab/config.hpp"
#include "steplab/curriculum.hpp"
#include "steplab/policy.hpp"

namespace steplab {

struct EvalOptions {
  int episodes = 16;
  bool stochastic = false;
  double reset_jitter = 0.01;
  int required_contacts = 10;   // success: at least this many target contacts
  bool use_train_radius = true; // otherwise the (narrow) evaluation radius
};

struct EvalStats {
  double mean_return = 0.0;
  double median_return = 0.0;
  double mean_contacts = 0.0;
  double success_rate = 0.0;
};

/// Rolls out episodes with steps drawn from `dist` (uniform sampling for the
/// paper's protocols). Never mutates the policy.
EvalStats eval_policy(const PolicyBundle& policy, const ExperimentConfig& cfg,
                      const ParamGrid& grid, const GridDistribution& dist,
                      std::uint64_t seed, const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Capability-limit probe: fixed-scenario sequences, r pushed along a grid.

enum class ProbeScenario {
  FlatStraight,    // theta = 0, psi = 0
  FlatYaw,         // theta = 0, psi = 20 deg
  SingleStepUp,    // one +50 deg step, then flat
  SingleStepDown,  // one -50 deg step, then flat
  ContinuousUp,    // all steps +50 deg
  ContinuousDown,  // all steps -50 deg
  SpiralUp,        // psi = 20 deg, theta = +30 deg
  SpiralDown,      // psi = 20 deg, theta = -30 deg
};

const char* probe_scenario_name(ProbeScenario s);
std::vector<ProbeScenario> all_probe_scenarios();

/// Builds the deterministic 10-step scenario sequence for one probed r.
StepSequence make_probe_sequence(ProbeScenario scenario, double r,
                                 const SequenceConfig& seq_cfg, int n_steps = 10);

struct ProbeRow {
  ProbeScenario scenario;
  double all_pass_r;  // NaN = dash (failed for every r)
  double any_pass_r;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  int repeats = 5;
  int steps_required = 10;
};

/// For each scenario and each r, runs `repeats` jittered episodes over ten
/// consecutive scenario steps; reports the largest r passing all repeats and
/// the largest passing at least one.
ProbeReport capability_limit_probe(const PolicyBundle& policy, const ExperimentConfig& cfg,
                                   std::span<const double> r_grid, std::uint64_t seed,
                                   int repeats = 5);

void print_probe_report(std::ostream& os, const ProbeReport& report);

// ---------------------------------------------------------------------------
// 5D robustness: steps achieved on random 5D sequences.

struct RobustnessResult {
  double mean_steps = 0.0;
  double std_steps = 0.0;
  std::vector<int> per_sequence;  // variable steps achieved before falling
};

/// Ten random 5D sequences of fifty variable steps each; counts successful
/// contacts on the variable steps.
RobustnessResult robustness_eval(const PolicyBundle& policy, const ExperimentConfig& cfg,
                                 std::uint64_t seed, int n_sequences = 10,
                                 int steps_per_sequence = 50);

void print_robustness_result(std::ostream& os, const RobustnessResult& result);

}  // namespace steplab
