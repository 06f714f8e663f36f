#include "steplab/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "steplab/heatmap.hpp"
#include "steplab/rollout.hpp"

namespace steplab {

namespace {

namespace fs = std::filesystem;

std::string iter_tag(int iteration) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", iteration);
  return buf;
}

double mean_finished_return(const std::vector<Episode>& episodes) {
  double sum = 0.0;
  int n = 0;
  for (const Episode& ep : episodes) {
    if (!ep.finished) continue;
    sum += ep.total_reward();
    ++n;
  }
  if (n == 0) {  // nothing ran to its end; fall back to partial returns
    for (const Episode& ep : episodes) sum += ep.total_reward();
    n = static_cast<int>(episodes.size());
  }
  return n > 0 ? sum / n : 0.0;
}

double median_finished_return(const std::vector<Episode>& episodes) {
  std::vector<double> r;
  for (const Episode& ep : episodes) {
    if (ep.finished) r.push_back(ep.total_reward());
  }
  if (r.empty()) {
    for (const Episode& ep : episodes) r.push_back(ep.total_reward());
  }
  if (r.empty()) return 0.0;
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  return n % 2 == 1 ? r[n / 2] : 0.5 * (r[n / 2 - 1] + r[n / 2]);
}

double distribution_entropy(const GridDistribution& dist) {
  double h = 0.0;
  for (double p : dist.mass) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::vector<Episode> collect_rollouts(const PolicyBundle& policy, const ExperimentConfig& cfg,
                                      const ParamGrid& grid, const GridDistribution& dist,
                                      int budget, int workers, std::uint64_t seed,
                                      std::uint64_t iteration) {
  SequenceConfig seq_cfg = cfg.sequence;
  seq_cfg.bounds = cfg.bounds;
  seq_cfg.step_radius = cfg.train_radius();
  seq_cfg.horizon = 0;

  const StepSampler sampler = make_grid_sampler(grid, dist, cfg.r_lo(), cfg.r_hi());

  std::vector<Episode> episodes;
  int collected = 0;
  std::uint64_t next_episode = 0;
  while (collected < budget) {
    const int block = workers;
    std::vector<Episode> block_eps(static_cast<std::size_t>(block));
    auto worker_fn = [&](int w) {
      StepperEnv env(cfg.env, seq_cfg, sampler);
      Rng rng = make_rng(seed, "rollout", iteration, next_episode + static_cast<std::uint64_t>(w));
      env.reset(rng);
      block_eps[static_cast<std::size_t>(w)] = run_episode(policy, env, rng, {.stochastic = true});
    };
    if (block == 1) {
      worker_fn(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(block));
      for (int w = 0; w < block; ++w) threads.emplace_back(worker_fn, w);
      for (auto& t : threads) t.join();
    }
    // Merge in episode-index order so worker count never changes results.
    for (int w = 0; w < block && collected < budget; ++w) {
      Episode& ep = block_eps[static_cast<std::size_t>(w)];
      const int remaining = budget - collected;
      if (ep.length() > remaining) ep = trim_episode(ep, remaining);
      collected += ep.length();
      episodes.push_back(std::move(ep));
    }
    next_episode += static_cast<std::uint64_t>(block);
  }
  return episodes;
}

TrainResult train(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::uint64_t hash = config_hash(cfg);

  fs::create_directories(cfg.out_dir);
  fs::create_directories(fs::path(cfg.out_dir) / "checkpoints");
  fs::create_directories(fs::path(cfg.out_dir) / "heatmaps");
  {
    std::ofstream snap(fs::path(cfg.out_dir) / "config.toml");
    snap << serialize_config(cfg);
  }

  const ParamGrid grid(GridBounds::with_dims(cfg.grid_dims, cfg.bounds), cfg.grid_resolution,
                       StepParams{.r = 0.5 * (cfg.r_lo() + cfg.r_hi())});

  NetworkSpec actor_spec = NetworkSpec::actor(StepperEnv::kObsDim, StepperEnv::kActDim, cfg.hidden);
  NetworkSpec critic_spec = NetworkSpec::critic(StepperEnv::kObsDim, cfg.hidden);
  PolicyBundle policy(actor_spec, critic_spec, cfg.rl.logstd, true);
  AdamPair opt{Adam(actor_spec.param_count(), cfg.rl.lr), Adam(critic_spec.param_count(), cfg.rl.lr)};
  {
    Rng init_rng = make_rng(cfg.seed, "init");
    policy.init(init_rng);
  }
  if (!cfg.init_checkpoint.empty()) {
    LoadedCheckpoint loaded = load_checkpoint_expecting(cfg.init_checkpoint, actor_spec, critic_spec);
    policy = std::move(loaded.policy);
    policy.logstd.setConstant(cfg.rl.logstd);
  }

  SequenceConfig train_seq = cfg.sequence;
  train_seq.bounds = cfg.bounds;
  train_seq.step_radius = cfg.train_radius();

  std::ofstream log(fs::path(cfg.out_dir) / "iterations.csv");
  log << "iteration,samples,episodes,mean_return,median_return,mean_contacts,stage,"
         "dist_entropy,max_prob,actor_loss,critic_loss,mean_rho,clip_fraction,"
         "eval_return,eval_contacts,eval_success\n";
  std::ofstream timing(fs::path(cfg.out_dir) / "timing.csv");
  timing << "iteration,seconds\n";

  CurriculumState cur = initial_curriculum_state(cfg.curriculum, grid);
  IterationStats last_stats;
  TrainResult result;
  result.run_dir = cfg.out_dir;

  const GridDistribution uniform_full = GridDistribution::uniform(grid);
  const bool adaptive = cfg.curriculum.strategy == Strategy::Adaptive ||
                        cfg.curriculum.strategy == Strategy::DifficultFavored;

  auto save_ckpt = [&](int iteration, const std::string& name) {
    const std::string path = (fs::path(cfg.out_dir) / "checkpoints" / name).string();
    save_checkpoint(path, policy, opt, {hash, static_cast<std::uint32_t>(iteration), cfg.seed});
    return path;
  };
  result.final_checkpoint = save_ckpt(0, "ckpt_initial.bin");

  for (int it = 1; it <= cfg.iterations; ++it) {
    const auto wall_start = std::chrono::steady_clock::now();

    if (adaptive) {
      cur.capability = estimate_capability(policy, grid, cfg.curriculum, cfg.env, train_seq,
                                           cfg.r_lo(), cfg.r_hi(),
                                           derive_seed(cfg.seed, "capability", static_cast<std::uint64_t>(it)));
    }
    cur = next_distribution(cfg.curriculum, cur, grid, last_stats);

    const std::vector<Episode> episodes =
        collect_rollouts(policy, cfg, grid, cur.dist, cfg.rl.samples_per_iteration,
                         cfg.workers, cfg.seed, static_cast<std::uint64_t>(it));

    last_stats.avg_return = mean_finished_return(episodes);
    const double median_return = median_finished_return(episodes);
    double mean_contacts = 0.0;
    for (const Episode& ep : episodes) mean_contacts += ep.target_contacts;
    mean_contacts /= static_cast<double>(episodes.size());

    Rng shuffle_rng = make_rng(cfg.seed, "ppo", static_cast<std::uint64_t>(it));
    const PpoStats ppo = ppo_update(policy, opt, episodes, cfg.rl, shuffle_rng);
    if (ppo.aborted) {
      std::fprintf(stderr, "steplab: non-finite training signal at iteration %d; halting\n", it);
      result.final_checkpoint = save_ckpt(it, "ckpt_halted.bin");
      break;
    }

    // Fold this iteration's observations into the normalizer after the
    // update so rollouts and update shared one snapshot.
    for (const Episode& ep : episodes) policy.obs_norm.update(ep.obs);

    const bool do_eval = cfg.eval_cadence > 0 &&
                         (it % cfg.eval_cadence == 0 || it == cfg.iterations);
    EvalStats eval;
    if (do_eval) {
      eval = eval_policy(policy, cfg, grid, uniform_full,
                         derive_seed(cfg.seed, "eval", static_cast<std::uint64_t>(it)),
                         {.episodes = cfg.eval_episodes});
      result.final_eval = eval;
    }

    double max_prob = 0.0;
    for (double p : cur.dist.mass) max_prob = std::max(max_prob, p);

    log << it << ',' << cfg.rl.samples_per_iteration << ',' << episodes.size() << ','
        << format_double(last_stats.avg_return) << ',' << format_double(median_return) << ','
        << format_double(mean_contacts) << ',' << cur.stage << ','
        << format_double(distribution_entropy(cur.dist)) << ',' << format_double(max_prob) << ','
        << format_double(ppo.actor_loss) << ',' << format_double(ppo.critic_loss) << ','
        << format_double(ppo.mean_rho) << ',' << format_double(ppo.clip_fraction) << ',';
    if (do_eval) {
      log << format_double(eval.mean_return) << ',' << format_double(eval.mean_contacts) << ','
          << format_double(eval.success_rate) << '\n';
    } else {
      log << ",,\n";
    }
    log.flush();

    const double seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - wall_start).count();
    timing << it << ',' << format_double(seconds) << '\n';

    if (cfg.heatmap_cadence > 0 && (it % cfg.heatmap_cadence == 0 || it == cfg.iterations)) {
      std::ofstream hm(fs::path(cfg.out_dir) / "heatmaps" / ("iter_" + iter_tag(it) + ".csv"));
      write_heatmap_csv(hm, grid, cur.dist, cur.capability);
    }
    if (cfg.checkpoint_cadence > 0 && it % cfg.checkpoint_cadence == 0) {
      save_ckpt(it, "ckpt_" + iter_tag(it) + ".bin");
    }
    result.iterations = it;
    result.final_stage = cur.stage;
  }

  result.final_checkpoint = save_ckpt(result.iterations, "ckpt_final.bin");
  return result;
}

}  // namespace steplab
