#include "steplab/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace steplab {

Eigen::VectorXd compute_returns(const Episode& ep, double gamma, const PolicyBundle& policy) {
  const int T = ep.length();
  Eigen::VectorXd targets(T);
  double next = 0.0;
  if (!ep.terminal) next = policy.value(ep.bootstrap_obs);
  for (int t = T - 1; t >= 0; --t) {
    next = ep.rewards[t] + gamma * next;
    targets[t] = next;
  }
  return targets;
}

namespace {

struct Batch {
  Eigen::MatrixXd obs;        // normalized, D x N
  Eigen::MatrixXd actions;    // A x N
  Eigen::VectorXd old_logp;   // N
  Eigen::VectorXd returns;    // N
  Eigen::VectorXd advantages; // N
};

Batch assemble(const PolicyBundle& policy, const std::vector<Episode>& episodes,
               const RlConfig& cfg) {
  int total = 0;
  for (const Episode& ep : episodes) total += ep.length();
  Batch b;
  b.obs.resize(policy.obs_dim(), total);
  b.actions.resize(policy.act_dim(), total);
  b.old_logp.resize(total);
  b.returns.resize(total);
  b.advantages.resize(total);
  int at = 0;
  for (const Episode& ep : episodes) {
    const int T = ep.length();
    const Eigen::VectorXd ret = compute_returns(ep, cfg.gamma, policy);
    b.obs.middleCols(at, T) = policy.obs_norm.apply(ep.obs);
    b.actions.middleCols(at, T) = ep.actions;
    b.old_logp.segment(at, T) = ep.logp;
    b.returns.segment(at, T) = ret;
    at += T;
  }
  // Advantage = return target minus the old critic's value estimate.
  const Eigen::VectorXd old_values = policy.critic.forward(b.obs).row(0);
  b.advantages = b.returns - old_values;
  if (cfg.normalize_advantages && total > 1) {
    const double mean = b.advantages.mean();
    const double sd = std::sqrt((b.advantages.array() - mean).square().sum() /
                                static_cast<double>(total));
    b.advantages = (b.advantages.array() - mean) / (sd + 1e-8);
  }
  return b;
}

}  // namespace

PpoStats ppo_update(PolicyBundle& policy, AdamPair& opt,
                    const std::vector<Episode>& episodes, const RlConfig& cfg,
                    Rng& shuffle_rng) {
  PpoStats stats;
  Batch batch = assemble(policy, episodes, cfg);
  const int N = static_cast<int>(batch.old_logp.size());
  if (N == 0) return stats;
  stats.samples = N;
  stats.mean_advantage = batch.advantages.mean();

  const Eigen::VectorXd actor_backup = policy.actor.params();
  const Eigen::VectorXd critic_backup = policy.critic.params();

  const Eigen::ArrayXd inv_var =
      (2.0 * policy.logstd.array()).exp().inverse();  // 1/sigma^2 per action dim

  std::vector<int> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);

  Eigen::VectorXd actor_grad(policy.actor.params().size());
  Eigen::VectorXd critic_grad(policy.critic.params().size());
  Mlp::Cache actor_cache, critic_cache;

  double loss_acc = 0.0, vloss_acc = 0.0, rho_acc = 0.0, clip_acc = 0.0;
  long sample_acc = 0;
  int minibatches = 0;

  const int mb_size = std::min(cfg.minibatch, N);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (int start = 0; start + mb_size <= N; start += mb_size) {
      const int M = mb_size;
      Eigen::MatrixXd obs(policy.obs_dim(), M);
      Eigen::MatrixXd act(policy.act_dim(), M);
      Eigen::VectorXd old_lp(M), ret(M), adv(M);
      for (int i = 0; i < M; ++i) {
        const int j = order[static_cast<std::size_t>(start + i)];
        obs.col(i) = batch.obs.col(j);
        act.col(i) = batch.actions.col(j);
        old_lp[i] = batch.old_logp[j];
        ret[i] = batch.returns[j];
        adv[i] = batch.advantages[j];
      }

      // Actor: clipped importance-weighted surrogate.
      const Eigen::MatrixXd mean = policy.actor.forward_cached(obs, actor_cache);
      const Eigen::MatrixXd diff = act - mean;
      Eigen::VectorXd logp(M);
      for (int i = 0; i < M; ++i) {
        double lp = 0.0;
        for (int k = 0; k < policy.act_dim(); ++k) {
          const double z2 = diff(k, i) * diff(k, i) * inv_var[k];
          lp += -0.91893853320467274178 - policy.logstd[k] - 0.5 * z2;
        }
        logp[i] = lp;
      }
      const Eigen::ArrayXd rho = (logp - old_lp).array().exp();
      const Eigen::ArrayXd clipped = rho.max(1.0 - cfg.clip_eps).min(1.0 + cfg.clip_eps);
      const Eigen::ArrayXd surr1 = rho * adv.array();
      const Eigen::ArrayXd surr2 = clipped * adv.array();
      const double objective = surr1.min(surr2).mean();
      const double actor_loss = -objective;

      // d(-objective)/dmean: gradient flows only where the unclipped branch
      // attains the min; dsurr1/dmean_k = adv * rho * (a_k - mean_k)/sigma_k^2.
      Eigen::MatrixXd dmean(policy.act_dim(), M);
      double clip_count = 0.0;
      for (int i = 0; i < M; ++i) {
        const bool unclipped_active = surr1[i] <= surr2[i];
        const double w = unclipped_active ? adv[i] * rho[i] / static_cast<double>(M) : 0.0;
        for (int k = 0; k < policy.act_dim(); ++k) {
          dmean(k, i) = -w * diff(k, i) * inv_var[k];
        }
        if (std::abs(rho[i] - 1.0) > cfg.clip_eps) clip_count += 1.0;
      }

      // Critic regression to the return targets.
      const Eigen::MatrixXd value = policy.critic.forward_cached(obs, critic_cache);
      const Eigen::ArrayXd verr = value.row(0).transpose().array() - ret.array();
      const double critic_loss = cfg.value_loss_coeff * verr.square().mean();
      Eigen::MatrixXd dvalue(1, M);
      dvalue.row(0) =
          (2.0 * cfg.value_loss_coeff / static_cast<double>(M)) * verr.transpose();

      if (!std::isfinite(actor_loss) || !std::isfinite(critic_loss)) {
        policy.actor.params() = actor_backup;
        policy.critic.params() = critic_backup;
        stats.aborted = true;
        return stats;
      }

      actor_grad.setZero();
      policy.actor.backward(actor_cache, dmean, actor_grad);
      opt.actor.step(policy.actor.params(), actor_grad);

      critic_grad.setZero();
      policy.critic.backward(critic_cache, dvalue, critic_grad);
      opt.critic.step(policy.critic.params(), critic_grad);

      loss_acc += actor_loss;
      vloss_acc += critic_loss;
      rho_acc += rho.sum();
      clip_acc += clip_count;
      sample_acc += M;
      ++minibatches;
    }
  }

  if (minibatches > 0) {
    stats.actor_loss = loss_acc / minibatches;
    stats.critic_loss = vloss_acc / minibatches;
    stats.mean_rho = rho_acc / static_cast<double>(sample_acc);
    stats.clip_fraction = clip_acc / static_cast<double>(sample_acc);
  }
  return stats;
}

}  // namespace steplab
