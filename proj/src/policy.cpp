#include "steplab/policy.hpp"

#include <cmath>

namespace steplab {

namespace {
constexpr double kNormEps = 1e-8;
constexpr double kNormClip = 10.0;
}  // namespace

RunningNorm RunningNorm::identity(int dim, bool enabled) {
  RunningNorm n;
  n.mean = Eigen::VectorXd::Zero(dim);
  n.var = Eigen::VectorXd::Ones(dim);
  n.count = 0.0;
  n.enabled = enabled;
  return n;
}

Eigen::VectorXd RunningNorm::apply(const Eigen::VectorXd& x) const {
  if (!enabled || count < 2.0) return x;
  Eigen::VectorXd z =
      (x - mean).array() / (var.array() + kNormEps).sqrt();
  return z.cwiseMax(-kNormClip).cwiseMin(kNormClip);
}

Eigen::MatrixXd RunningNorm::apply(const Eigen::MatrixXd& x) const {
  if (!enabled || count < 2.0) return x;
  Eigen::ArrayXd inv_std = 1.0 / (var.array() + kNormEps).sqrt();
  Eigen::MatrixXd z = ((x.colwise() - mean).array().colwise() * inv_std).matrix();
  return z.cwiseMax(-kNormClip).cwiseMin(kNormClip);
}

void RunningNorm::update(const Eigen::MatrixXd& batch) {
  if (!enabled || batch.cols() == 0) return;
  const double n_b = static_cast<double>(batch.cols());
  const Eigen::VectorXd mean_b = batch.rowwise().mean();
  const Eigen::VectorXd var_b =
      (batch.colwise() - mean_b).array().square().rowwise().sum() / n_b;
  if (count == 0.0) {
    mean = mean_b;
    var = var_b;
    count = n_b;
    return;
  }
  // Chan et al. parallel variance merge.
  const double total = count + n_b;
  const Eigen::VectorXd delta = mean_b - mean;
  const Eigen::VectorXd m2 = var * count + var_b * n_b +
                             delta.array().square().matrix() * (count * n_b / total);
  mean += delta * (n_b / total);
  var = m2 / total;
  count = total;
}

double gaussian_logprob(const Eigen::VectorXd& mean, const Eigen::VectorXd& logstd,
                        const Eigen::VectorXd& a) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double z = (a[i] - mean[i]) / std::exp(logstd[i]);
    lp += -kHalfLog2Pi - logstd[i] - 0.5 * z * z;
  }
  return lp;
}

PolicyBundle::PolicyBundle(NetworkSpec actor_spec, NetworkSpec critic_spec,
                           double logstd_init, bool normalize_obs)
    : actor(std::move(actor_spec)),
      critic(std::move(critic_spec)),
      logstd(Eigen::VectorXd::Constant(actor.spec().output, logstd_init)),
      obs_norm(RunningNorm::identity(actor.spec().input, normalize_obs)) {}

void PolicyBundle::init(Rng& rng) {
  actor.init_params(rng);
  critic.init_params(rng);
}

Eigen::VectorXd PolicyBundle::act_mean(const Eigen::VectorXd& obs) const {
  return actor.forward1(obs_norm.apply(obs));
}

PolicyBundle::Sample PolicyBundle::act_stochastic(const Eigen::VectorXd& obs, Rng& rng) const {
  const Eigen::VectorXd mean = act_mean(obs);
  Eigen::VectorXd action(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    action[i] = mean[i] + std::exp(logstd[i]) * normal01(rng);
  }
  return {action, gaussian_logprob(mean, logstd, action)};
}

double PolicyBundle::value(const Eigen::VectorXd& obs) const {
  return critic.forward1(obs_norm.apply(obs))[0];
}

Eigen::VectorXd PolicyBundle::value_batch(const Eigen::MatrixXd& obs) const {
  return critic.forward(obs_norm.apply(obs)).row(0);
}

}  // namespace steplab
