#pragma once

#include <Eigen/Dense>
#include <vector>

#include "steplab/policy.hpp"

namespace steplab {

struct RlConfig {
  double gamma = 0.99;
  double clip_eps = 0.2;
  double lr = 3e-5;
  int minibatch = 1024;
  int epochs = 10;
  double value_loss_coeff = 0.5;
  bool normalize_advantages = true;
  double logstd = -1.5;
  int samples_per_iteration = 50000;
};

/// One rollout episode. Observations and actions are stored raw; whitening
/// happens at use sites against the iteration's normalizer snapshot.
struct Episode {
  Eigen::MatrixXd obs;      // obs_dim x T
  Eigen::MatrixXd actions;  // act_dim x T
  Eigen::VectorXd rewards;  // T
  Eigen::VectorXd logp;     // behavior log-probs, T
  bool terminal = true;               // ended by failure => no bootstrap
  Eigen::VectorXd bootstrap_obs;      // o_{T+1} when truncated
  int target_contacts = 0;
  bool finished = true;               // ran to its own end within the iteration

  int length() const { return static_cast<int>(rewards.size()); }
  double total_reward() const { return rewards.sum(); }
};

/// Backward Monte Carlo value recursion V(o_t) = r_t + gamma V(o_{t+1});
/// terminal episodes bootstrap zero, truncated ones bootstrap the old critic
/// at o_{T+1}.
Eigen::VectorXd compute_returns(const Episode& ep, double gamma, const PolicyBundle& policy);

struct PpoStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double mean_rho = 1.0;
  double clip_fraction = 0.0;
  double mean_advantage = 0.0;
  int samples = 0;
  bool aborted = false;
};

struct AdamPair {
  Adam actor;
  Adam critic;
};

/// Clipped-surrogate PPO ascent with minibatch Adam; the critic is regressed
/// to the return targets by squared error. A non-finite loss aborts the
/// update and restores the previous parameters.
PpoStats ppo_update(PolicyBundle& policy, AdamPair& opt,
                    const std::vector<Episode>& episodes, const RlConfig& cfg,
                    Rng& shuffle_rng);

}  // namespace steplab
