#pragma once

#include <span>
#include <utility>

namespace steplab {

struct RewardConfig {
  double k_target = 50.0;      // target reward magnitude
  double k_d = 0.25;           // target reward sensitivity, m
  double dt = 1.0 / 30.0;      // control period, s
  double speed_cap = 1.6;      // m/s
  double alive_bonus = 2.0;
  double min_root_height = 0.7;          // m above the lower foot
  double energy_work_coeff = 4.5;
  double energy_act_coeff = 0.225;
  double limit_coeff = 0.1;
  double limit_fraction = 0.99;          // of the half range, measured from center
  double roll_band = 0.4;                // |alpha_x| <= band => no penalty
  double pitch_band_lo = -0.2;
  double pitch_band_hi = 0.4;
};

/// Normalized per-channel commands and their rates, standing in for joint
/// torques and joint velocities.
struct ActuatorState {
  std::span<const double> action;  // a_j, each in [-1, 1]
  std::span<const double> rate;    // v_j
};

/// k_target * exp(-d / k_d) when contact with the desired step was made this
/// tick, zero otherwise.
double target_reward(double d, bool contacted, const RewardConfig& cfg);

/// Rate of approach toward the target, ground-plane distances.
double progress_reward(double d_prev, double d_cur, double dt);

double energy_penalty(const ActuatorState& act, const RewardConfig& cfg);

/// -limit_coeff per channel strictly outside the central `limit_fraction` of
/// its [lo, hi] range.
double limit_penalty(std::span<const double> values,
                     std::span<const std::pair<double, double>> limits,
                     const RewardConfig& cfg);

double posture_penalty(double alpha_x, double alpha_y, const RewardConfig& cfg);

double speed_penalty(double root_speed, const RewardConfig& cfg);

/// (alive bonus, terminate flag). Height exactly at the minimum still counts
/// as alive.
std::pair<double, bool> alive_check(double root_height_above_lower_foot,
                                    const RewardConfig& cfg);

}  // namespace steplab
