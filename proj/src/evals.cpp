#include "steplab/evals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "steplab/rollout.hpp"

namespace steplab {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SequenceConfig sequence_config_for(const ExperimentConfig& cfg, bool train_radius) {
  SequenceConfig seq = cfg.sequence;
  seq.bounds = cfg.bounds;
  if (train_radius) seq.step_radius = cfg.train_radius();
  return seq;
}

}  // namespace

EvalStats eval_policy(const PolicyBundle& policy, const ExperimentConfig& cfg,
                      const ParamGrid& grid, const GridDistribution& dist,
                      std::uint64_t seed, const EvalOptions& opts) {
  EnvConfig env_cfg = cfg.env;
  env_cfg.reset_jitter = opts.reset_jitter;
  const SequenceConfig seq_cfg = sequence_config_for(cfg, opts.use_train_radius);
  const StepSampler sampler = make_grid_sampler(grid, dist, cfg.r_lo(), cfg.r_hi());

  std::vector<double> returns;
  double contacts_sum = 0.0;
  int successes = 0;
  for (int e = 0; e < opts.episodes; ++e) {
    StepperEnv env(env_cfg, seq_cfg, sampler);
    Rng rng = make_rng(seed, "eval-episode", static_cast<std::uint64_t>(e));
    env.reset(rng);
    const Episode ep = run_episode(policy, env, rng, {.stochastic = opts.stochastic});
    returns.push_back(ep.total_reward());
    contacts_sum += ep.target_contacts;
    if (ep.target_contacts >= opts.required_contacts) ++successes;
  }

  EvalStats stats;
  const double n = static_cast<double>(opts.episodes);
  for (double r : returns) stats.mean_return += r;
  stats.mean_return /= n;
  stats.median_return = median_of(returns);
  stats.mean_contacts = contacts_sum / n;
  stats.success_rate = static_cast<double>(successes) / n;
  return stats;
}

const char* probe_scenario_name(ProbeScenario s) {
  switch (s) {
    case ProbeScenario::FlatStraight: return "flat psi=0";
    case ProbeScenario::FlatYaw: return "flat psi=20";
    case ProbeScenario::SingleStepUp: return "single-step theta=+50";
    case ProbeScenario::SingleStepDown: return "single-step theta=-50";
    case ProbeScenario::ContinuousUp: return "continuous theta=+50";
    case ProbeScenario::ContinuousDown: return "continuous theta=-50";
    case ProbeScenario::SpiralUp: return "spiral theta=+30";
    case ProbeScenario::SpiralDown: return "spiral theta=-30";
  }
  return "?";
}

std::vector<ProbeScenario> all_probe_scenarios() {
  return {ProbeScenario::FlatStraight, ProbeScenario::FlatYaw,
          ProbeScenario::SingleStepUp, ProbeScenario::SingleStepDown,
          ProbeScenario::ContinuousUp, ProbeScenario::ContinuousDown,
          ProbeScenario::SpiralUp, ProbeScenario::SpiralDown};
}

StepSequence make_probe_sequence(ProbeScenario scenario, double r,
                                 const SequenceConfig& seq_cfg, int n_steps) {
  SequenceConfig cfg = seq_cfg;
  cfg.horizon = 3 + n_steps;
  Rng unused(0);
  int placed = 0;
  const StepSampler scripted = [&](Rng&) {
    StepParams p;
    p.r = r;
    switch (scenario) {
      case ProbeScenario::FlatStraight: break;
      case ProbeScenario::FlatYaw: p.psi = deg2rad(20.0); break;
      case ProbeScenario::SingleStepUp:
        p.theta = placed == 0 ? deg2rad(50.0) : 0.0;
        break;
      case ProbeScenario::SingleStepDown:
        p.theta = placed == 0 ? deg2rad(-50.0) : 0.0;
        break;
      case ProbeScenario::ContinuousUp: p.theta = deg2rad(50.0); break;
      case ProbeScenario::ContinuousDown: p.theta = deg2rad(-50.0); break;
      case ProbeScenario::SpiralUp:
        p.psi = deg2rad(20.0);
        p.theta = deg2rad(30.0);
        break;
      case ProbeScenario::SpiralDown:
        p.psi = deg2rad(20.0);
        p.theta = deg2rad(-30.0);
        break;
    }
    ++placed;
    return p;
  };
  StepSequence seq = init_sequence(cfg, scripted, unused);
  // Materialize the whole scenario now so later extension draws nothing new.
  while (static_cast<int>(seq.steps.size()) < cfg.horizon) {
    seq.steps.push_back(place_step(seq.steps.back(), scripted(unused)));
  }
  return seq;
}

ProbeReport capability_limit_probe(const PolicyBundle& policy, const ExperimentConfig& cfg,
                                   std::span<const double> r_grid, std::uint64_t seed,
                                   int repeats) {
  ProbeReport report;
  report.repeats = repeats;

  EnvConfig env_cfg = cfg.env;
  env_cfg.reset_jitter = std::max(cfg.env.reset_jitter, 0.01);  // jittered repeats
  const SequenceConfig seq_cfg = sequence_config_for(cfg, /*train_radius=*/false);

  std::uint64_t episode_id = 0;
  for (ProbeScenario scenario : all_probe_scenarios()) {
    double all_pass = std::numeric_limits<double>::quiet_NaN();
    double any_pass = std::numeric_limits<double>::quiet_NaN();
    for (double r : r_grid) {
      int passes = 0;
      for (int rep = 0; rep < repeats; ++rep) {
        StepperEnv env(env_cfg, seq_cfg, [](Rng&) { return StepParams{}; });
        Rng rng = make_rng(seed, "probe", episode_id++);
        env.reset_with_sequence(make_probe_sequence(scenario, r, seq_cfg,
                                                    report.steps_required), rng);
        const Episode ep = run_episode(policy, env, rng, {.stochastic = false});
        // All scenario targets consumed counts as sustained performance.
        if (ep.target_contacts >= report.steps_required + 1) ++passes;
      }
      if (passes == repeats && !(all_pass > r)) all_pass = r;
      if (passes >= 1 && !(any_pass > r)) any_pass = r;
    }
    report.rows.push_back({scenario, all_pass, any_pass});
  }
  return report;
}

void print_probe_report(std::ostream& os, const ProbeReport& report) {
  os << "capability limits (max r sustained for " << report.steps_required
     << " consecutive steps, " << report.repeats << " jittered repeats)\n";
  os << "scenario                      all-pass   any-pass\n";
  for (const ProbeRow& row : report.rows) {
    char line[96];
    const char* name = probe_scenario_name(row.scenario);
    if (std::isnan(row.all_pass_r) && std::isnan(row.any_pass_r)) {
      std::snprintf(line, sizeof(line), "%-28s  %8s  %8s\n", name, "---", "---");
    } else if (std::isnan(row.all_pass_r)) {
      std::snprintf(line, sizeof(line), "%-28s  %8s  %8.2f\n", name, "---", row.any_pass_r);
    } else {
      std::snprintf(line, sizeof(line), "%-28s  %8.2f  %8.2f\n", name, row.all_pass_r,
                    row.any_pass_r);
    }
    os << line;
  }
}

RobustnessResult robustness_eval(const PolicyBundle& policy, const ExperimentConfig& cfg,
                                 std::uint64_t seed, int n_sequences, int steps_per_sequence) {
  RobustnessResult result;
  const ParamGrid grid(GridBounds::dims5(cfg.bounds), cfg.grid_resolution);
  const GridDistribution uniform = GridDistribution::uniform(grid);
  const StepSampler sampler = make_grid_sampler(grid, uniform, cfg.bounds.r_min, cfg.bounds.r_max);

  EnvConfig env_cfg = cfg.env;
  env_cfg.reset_jitter = std::max(cfg.env.reset_jitter, 0.01);
  // Long sequences need the tick budget to stretch with them.
  env_cfg.tick_budget = std::max(env_cfg.tick_budget,
                                 steps_per_sequence * (cfg.env.look_ahead_delay + 60));
  SequenceConfig seq_cfg = sequence_config_for(cfg, /*train_radius=*/true);
  seq_cfg.horizon = 3 + steps_per_sequence;

  for (int s = 0; s < n_sequences; ++s) {
    StepperEnv env(env_cfg, seq_cfg, sampler);
    Rng rng = make_rng(seed, "robustness", static_cast<std::uint64_t>(s));
    env.reset(rng);
    const Episode ep = run_episode(policy, env, rng, {.stochastic = false});
    // Contacts on the fixed third step do not count as variable steps.
    const int variable = std::clamp(ep.target_contacts - 1, 0, steps_per_sequence);
    result.per_sequence.push_back(variable);
  }

  const double n = static_cast<double>(n_sequences);
  for (int v : result.per_sequence) result.mean_steps += v;
  result.mean_steps /= n;
  for (int v : result.per_sequence) {
    const double d = v - result.mean_steps;
    result.std_steps += d * d;
  }
  result.std_steps = std::sqrt(result.std_steps / n);
  return result;
}

void print_robustness_result(std::ostream& os, const RobustnessResult& result) {
  char line[128];
  std::snprintf(line, sizeof(line), "steps before falling: %.1f +- %.1f  (n=%zu sequences)\n",
                result.mean_steps, result.std_steps, result.per_sequence.size());
  os << line;
  os << "per-sequence:";
  for (int v : result.per_sequence) os << ' ' << v;
  os << '\n';
}

}  // namespace steplab
