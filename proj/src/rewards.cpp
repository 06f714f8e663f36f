#include "steplab/rewards.hpp"

#include <cmath>
#include <cstddef>

namespace steplab {

double target_reward(double d, bool contacted, const RewardConfig& cfg) {
  if (!contacted) return 0.0;
  return cfg.k_target * std::exp(-d / cfg.k_d);
}

double progress_reward(double d_prev, double d_cur, double dt) {
  return (d_prev - d_cur) / dt;
}

double energy_penalty(const ActuatorState& act, const RewardConfig& cfg) {
  const std::size_t n = act.action.size();
  if (n == 0) return 0.0;
  double work = 0.0, effort = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    work += std::abs(act.action[j] * act.rate[j]);
    effort += act.action[j] * act.action[j];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return -cfg.energy_work_coeff * inv_n * work - cfg.energy_act_coeff * inv_n * effort;
}

double limit_penalty(std::span<const double> values,
                     std::span<const std::pair<double, double>> limits,
                     const RewardConfig& cfg) {
  int violations = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double center = 0.5 * (limits[j].first + limits[j].second);
    const double half = 0.5 * (limits[j].second - limits[j].first) * cfg.limit_fraction;
    if (values[j] < center - half || values[j] > center + half) ++violations;
  }
  return -cfg.limit_coeff * static_cast<double>(violations);
}

double posture_penalty(double alpha_x, double alpha_y, const RewardConfig& cfg) {
  double penalty = 0.0;
  if (alpha_x < -cfg.roll_band || alpha_x > cfg.roll_band) penalty -= std::abs(alpha_x);
  if (alpha_y < cfg.pitch_band_lo || alpha_y > cfg.pitch_band_hi) penalty -= std::abs(alpha_y);
  return penalty;
}

double speed_penalty(double root_speed, const RewardConfig& cfg) {
  return -std::max(root_speed - cfg.speed_cap, 0.0);
}

std::pair<double, bool> alive_check(double root_height_above_lower_foot,
                                    const RewardConfig& cfg) {
  if (root_height_above_lower_foot >= cfg.min_root_height) return {cfg.alive_bonus, false};
  return {0.0, true};
}

}  // namespace steplab
