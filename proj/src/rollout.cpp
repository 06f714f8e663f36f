#include "steplab/rollout.hpp"

#include <stdexcept>

namespace steplab {

Episode run_episode(const PolicyBundle& policy, StepperEnv& env, Rng& rng,
                    const RolloutOptions& opts) {
  std::vector<Eigen::VectorXd> obs;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> rewards, logps;

  Eigen::VectorXd o = env.observe();
  bool failed = false;
  int ticks = 0;
  while (true) {
    Eigen::VectorXd a;
    double lp = 0.0;
    if (opts.stochastic) {
      PolicyBundle::Sample s = policy.act_stochastic(o, rng);
      a = std::move(s.action);
      lp = s.logprob;
    } else {
      a = policy.act_mean(o);
      lp = gaussian_logprob(a, policy.logstd, a);
    }
    const StepResult r = env.step(a, rng);
    obs.push_back(o);
    actions.push_back(a);
    rewards.push_back(r.reward.total());
    logps.push_back(lp);
    o = r.obs;
    ++ticks;
    if (r.done) {
      failed = r.failed;
      break;
    }
    if (opts.max_ticks > 0 && ticks >= opts.max_ticks) break;
  }

  Episode ep;
  const int T = static_cast<int>(rewards.size());
  ep.obs.resize(policy.obs_dim(), T);
  ep.actions.resize(policy.act_dim(), T);
  ep.rewards.resize(T);
  ep.logp.resize(T);
  for (int t = 0; t < T; ++t) {
    ep.obs.col(t) = obs[static_cast<std::size_t>(t)];
    ep.actions.col(t) = actions[static_cast<std::size_t>(t)];
    ep.rewards[t] = rewards[static_cast<std::size_t>(t)];
    ep.logp[t] = logps[static_cast<std::size_t>(t)];
  }
  ep.terminal = failed;
  if (!failed) ep.bootstrap_obs = o;
  ep.target_contacts = env.state().contacts;
  ep.finished = true;
  return ep;
}

Episode trim_episode(const Episode& ep, int ticks) {
  if (ticks >= ep.length()) return ep;
  if (ticks < 1) throw std::invalid_argument("trim_episode needs ticks >= 1");
  Episode cut;
  cut.obs = ep.obs.leftCols(ticks);
  cut.actions = ep.actions.leftCols(ticks);
  cut.rewards = ep.rewards.head(ticks);
  cut.logp = ep.logp.head(ticks);
  cut.terminal = false;
  cut.bootstrap_obs = ep.obs.col(ticks);
  cut.target_contacts = ep.target_contacts;
  cut.finished = false;
  return cut;
}

}  // namespace steplab
