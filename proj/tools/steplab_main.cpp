#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "steplab/evals.hpp"
#include "steplab/heatmap.hpp"
#include "steplab/rollout.hpp"
#include "steplab/train.hpp"

namespace {

using namespace steplab;

ExperimentConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) {
    ExperimentConfig cfg;
    cfg.sequence.bounds = cfg.bounds;
    return cfg;
  }
  return load_config_file(config_path);
}

LoadedCheckpoint load_policy(const std::string& path) {
  if (path.empty()) throw ConfigError("--checkpoint is required");
  return load_checkpoint(path);
}

std::vector<double> default_r_grid(const StepBounds& b) {
  std::vector<double> grid;
  for (double r = b.r_min; r <= b.r_max + 1e-9; r += 0.05) grid.push_back(r);
  return grid;
}

int run_train(const std::string& config_path, std::uint64_t seed, bool seed_set,
              const std::string& out) {
  ExperimentConfig cfg = load_or_default(config_path);
  if (seed_set) cfg.seed = seed;
  if (!out.empty()) cfg.out_dir = out;
  const TrainResult result = train(cfg);
  std::cout << "run dir:          " << result.run_dir << "\n"
            << "iterations:       " << result.iterations << "\n"
            << "final stage:      " << result.final_stage << "\n"
            << "final checkpoint: " << result.final_checkpoint << "\n"
            << "uniform-eval return:   " << result.final_eval.mean_return << "\n"
            << "uniform-eval contacts: " << result.final_eval.mean_contacts << "\n"
            << "uniform-eval success:  " << result.final_eval.success_rate << "\n";
  return 0;
}

int run_eval_limits(const std::string& config_path, const std::string& ckpt,
                    std::uint64_t seed) {
  const ExperimentConfig cfg = load_or_default(config_path);
  const LoadedCheckpoint loaded = load_policy(ckpt);
  const auto r_grid = default_r_grid(cfg.bounds);
  const ProbeReport report = capability_limit_probe(loaded.policy, cfg, r_grid, seed);
  print_probe_report(std::cout, report);
  return 0;
}

int run_eval_robustness(const std::string& config_path, const std::string& ckpt,
                        std::uint64_t seed, int sequences, int steps) {
  const ExperimentConfig cfg = load_or_default(config_path);
  const LoadedCheckpoint loaded = load_policy(ckpt);
  const RobustnessResult result = robustness_eval(loaded.policy, cfg, seed, sequences, steps);
  print_robustness_result(std::cout, result);
  return 0;
}

int run_heatmap(const std::string& run_dir) {
  const int written = export_heatmaps(run_dir);
  std::cout << "rendered " << written << " heatmap image(s) under " << run_dir
            << "/heatmaps\n";
  return 0;
}

int run_terrain(const std::string& config_path, const std::string& ckpt, std::uint64_t seed,
                int size, double amplitude, double frequency, int octaves, int steps,
                double step_length, const std::string& out) {
  const ExperimentConfig cfg = load_or_default(config_path);
  namespace fs = std::filesystem;
  fs::create_directories(out);

  const double cell = 0.5;
  const HeightField field = perlin_heightfield(seed, size, size, cell, amplitude, frequency, octaves);
  {
    std::ofstream os(fs::path(out) / "field.bin", std::ios::binary);
    field.save_binary(os);
    std::ofstream asc(fs::path(out) / "field.asc");
    field.save_ascii(asc);
  }

  FootstepPlan plan;
  plan.start = {size * cell * 0.5, size * cell * 0.25};
  plan.start_heading = 0.0;
  plan.n_steps = steps;
  plan.step_length = step_length;
  plan.step_radius = cfg.train_radius();
  StepSequence seq = project_footsteps(field, plan);
  {
    std::ofstream os(fs::path(out) / "steps.txt");
    write_steps(os, seq);
  }
  std::cout << "terrain written to " << out << " (hash " << std::hex << field.content_hash()
            << std::dec << ")\n";

  if (!ckpt.empty()) {
    const LoadedCheckpoint loaded = load_policy(ckpt);
    EnvConfig env_cfg = cfg.env;
    env_cfg.tick_budget = std::max(env_cfg.tick_budget, steps * (env_cfg.look_ahead_delay + 60));
    SequenceConfig seq_cfg = cfg.sequence;
    seq_cfg.bounds = cfg.bounds;
    seq_cfg.step_radius = cfg.train_radius();
    StepperEnv env(env_cfg, seq_cfg, [](Rng&) { return StepParams{}; });
    env.set_heightfield(&field);
    Rng rng = make_rng(seed, "terrain-run");
    env.reset_with_sequence(std::move(seq), rng);
    const Episode ep = run_episode(loaded.policy, env, rng, {.stochastic = false});
    std::cout << "policy walked " << std::max(0, ep.target_contacts - 1) << "/" << steps
              << " terrain steps, return " << ep.total_reward() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steplab: curriculum-driven stepping-stone RL laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ckpt, run_dir;
  std::uint64_t seed = 1;
  bool seed_set = false;
  int sequences = 10, steps = 50, size = 96, octaves = 4;
  double amplitude = 0.8, frequency = 0.15, step_length = 0.7;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file");
    cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* cmd_train = app.add_subcommand("train", "train a policy");
  add_common(cmd_train);
  cmd_train->add_option("--out", out_dir, "output run directory");

  CLI::App* cmd_limits = app.add_subcommand("eval-limits", "capability-limit probe");
  add_common(cmd_limits);
  cmd_limits->add_option("--checkpoint", ckpt, "policy checkpoint");

  CLI::App* cmd_robust = app.add_subcommand("eval-robustness", "5D robustness evaluation");
  add_common(cmd_robust);
  cmd_robust->add_option("--checkpoint", ckpt, "policy checkpoint");
  cmd_robust->add_option("--sequences", sequences, "number of 5D sequences");
  cmd_robust->add_option("--steps", steps, "variable steps per sequence");

  CLI::App* cmd_heatmap = app.add_subcommand("heatmap", "render heatmap CSVs to SVG");
  cmd_heatmap->add_option("--run", run_dir, "run directory")->required();

  CLI::App* cmd_terrain = app.add_subcommand("terrain", "Perlin terrain + footstep projection");
  add_common(cmd_terrain);
  cmd_terrain->add_option("--checkpoint", ckpt, "optional policy to run");
  cmd_terrain->add_option("--size", size, "grid points per side");
  cmd_terrain->add_option("--amplitude", amplitude, "height amplitude, m");
  cmd_terrain->add_option("--frequency", frequency, "base noise frequency");
  cmd_terrain->add_option("--octaves", octaves, "noise octaves");
  cmd_terrain->add_option("--steps", steps, "footsteps to project");
  cmd_terrain->add_option("--step-length", step_length, "footstep length, m");
  cmd_terrain->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_train->parsed()) return run_train(config_path, seed, seed_set, out_dir);
    if (cmd_limits->parsed()) return run_eval_limits(config_path, ckpt, seed);
    if (cmd_robust->parsed()) return run_eval_robustness(config_path, ckpt, seed, sequences, steps);
    if (cmd_heatmap->parsed()) return run_heatmap(run_dir);
    if (cmd_terrain->parsed()) {
      return run_terrain(config_path, ckpt, seed, size, amplitude, frequency, octaves, steps,
                         step_length, out_dir);
    }
  } catch (const steplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
