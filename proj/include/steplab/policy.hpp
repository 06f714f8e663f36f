#pragma once

#include <Eigen/Dense>

#include "steplab/mlp.hpp"
#include "steplab/rng.hpp"

namespace steplab {

/// Running per-dimension mean/variance (Welford) for observation whitening.
/// Snapshot semantics: callers normalize against the state captured at the
/// start of an iteration and fold new data in afterwards.
struct RunningNorm {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  double count = 0.0;
  bool enabled = true;

  static RunningNorm identity(int dim, bool enabled = true);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  void update(const Eigen::MatrixXd& batch);
};

double gaussian_logprob(const Eigen::VectorXd& mean, const Eigen::VectorXd& logstd,
                        const Eigen::VectorXd& a);

/// Actor + critic + fixed exploration log-std + observation normalizer.
struct PolicyBundle {
  Mlp actor;
  Mlp critic;
  Eigen::VectorXd logstd;
  RunningNorm obs_norm;

  PolicyBundle(NetworkSpec actor_spec, NetworkSpec critic_spec, double logstd_init,
               bool normalize_obs);

  int obs_dim() const { return actor.spec().input; }
  int act_dim() const { return actor.spec().output; }

  void init(Rng& rng);

  /// Deterministic mean action for a raw observation.
  Eigen::VectorXd act_mean(const Eigen::VectorXd& obs) const;

  struct Sample {
    Eigen::VectorXd action;  // raw gaussian sample around the mean
    double logprob;
  };
  Sample act_stochastic(const Eigen::VectorXd& obs, Rng& rng) const;

  double value(const Eigen::VectorXd& obs) const;
  Eigen::VectorXd value_batch(const Eigen::MatrixXd& obs) const;
};

}  // namespace steplab
