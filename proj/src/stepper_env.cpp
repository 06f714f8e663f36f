#include "steplab/stepper_env.hpp"

#include <cmath>
#include <stdexcept>

namespace steplab {

StepperEnv::StepperEnv(EnvConfig cfg, SequenceConfig seq_cfg, StepSampler sampler)
    : cfg_(cfg), seq_cfg_(seq_cfg), sampler_(std::move(sampler)) {}

void StepperEnv::reset(Rng& rng) {
  reset_with_sequence(init_sequence(seq_cfg_, sampler_, rng), rng);
}

void StepperEnv::reset_with_sequence(StepSequence seq, Rng& rng) {
  seq_ = std::move(seq);
  state_ = EnvState{};
  const Step& left = seq_.steps[0];
  const Step& right = seq_.steps[1];
  state_.swing_foot = left.center;
  state_.stance_foot = right.center;
  state_.root_pos = 0.5 * (left.center + right.center) + Vec3(0, 0, cfg_.rest_height);
  state_.root_vel.setZero();
  state_.yaw = right.heading;
  state_.stance_step = 1;
  state_.swing_support = 0;
  state_.stance_contact = true;
  state_.swing_contact = true;
  if (cfg_.reset_jitter > 0.0) {
    for (int i = 0; i < 3; ++i) state_.root_pos[i] += cfg_.reset_jitter * normal01(rng);
    for (int i = 0; i < 3; ++i) state_.root_vel[i] += cfg_.reset_jitter * normal01(rng);
  }
  state_.prev_target = seq_.target_index;
  state_.prev_target_dist = (state_.root_pos - seq_.target().center).head<2>().norm();
}

std::optional<StepperEnv::Support> StepperEnv::support_at(double x, double y) const {
  const int last = static_cast<int>(seq_.steps.size()) - 1;
  const int lo = std::max(0, seq_.target_index - 6);
  const int hi = std::min(last, seq_.target_index + 1);
  int best = -1;
  double best_d2 = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const Step& s = seq_.steps[static_cast<std::size_t>(i)];
    const double dx = x - s.center.x(), dy = y - s.center.y();
    const double d2 = dx * dx + dy * dy;
    if (d2 <= s.radius * s.radius && (best < 0 || d2 < best_d2)) {
      best = i;
      best_d2 = d2;
    }
  }
  if (best >= 0) {
    return Support{best, surface_height(seq_.steps[static_cast<std::size_t>(best)], x, y)};
  }
  if (field_ != nullptr) return Support{-1, field_->sample(x, y)};
  return std::nullopt;
}

StepResult StepperEnv::step(const Action& action, Rng& rng) {
  StepResult result;
  if (!state_.alive) throw std::logic_error("step() on a terminated episode");

  Action a = action.cwiseMax(-1.0).cwiseMin(1.0);

  tick_sequence(seq_, seq_cfg_, sampler_, rng);

  // Facing turns toward the stance step's outgoing direction.
  {
    const double target_heading = seq_.steps[static_cast<std::size_t>(state_.stance_step)].heading;
    const double err = wrap_angle(target_heading - state_.yaw);
    const double max_turn = cfg_.yaw_rate * cfg_.dt;
    state_.yaw = wrap_angle(state_.yaw + std::clamp(err, -max_turn, max_turn));
  }

  // Root dynamics: destabilizing inverted pendulum in the plane, critically
  // damped spring to rest height above the stance foot vertically.
  const Vec3 lean_world = rotate_z(state_.yaw, {cfg_.lean_accel * a[3], cfg_.lean_accel * a[4], 0.0});
  Vec3 accel;
  accel.x() = lean_world.x() + (cfg_.gravity / cfg_.rest_height) * (state_.root_pos.x() - state_.stance_foot.x());
  accel.y() = lean_world.y() + (cfg_.gravity / cfg_.rest_height) * (state_.root_pos.y() - state_.stance_foot.y());
  accel.z() = cfg_.spring_k * (state_.stance_foot.z() + cfg_.rest_height - state_.root_pos.z()) -
              cfg_.spring_d * state_.root_vel.z();
  state_.root_vel += accel * cfg_.dt;
  state_.root_pos += state_.root_vel * cfg_.dt;

  // Swing foot: planted feet are anchored until commanded upward.
  const Vec3 swing_vel = rotate_z(state_.yaw, {cfg_.swing_speed * a[0], cfg_.swing_speed * a[1], 0.0}) +
                         Vec3(0.0, 0.0, cfg_.swing_speed * a[2]);
  bool planted = state_.swing_support >= 0 || (field_ != nullptr && state_.swing_contact);
  if (planted) {
    if (a[2] > 0.0) {
      planted = false;
      state_.swing_support = -1;
      state_.swing_contact = false;
      state_.swing_foot += swing_vel * cfg_.dt;
    }
  } else {
    state_.swing_foot += swing_vel * cfg_.dt;
  }

  // Contact: the swing foot descends through a local surface.
  const Step& target_before = seq_.target();
  const int target_index_before = seq_.target_index;
  if (!planted && swing_vel.z() < 0.0) {
    const auto support = support_at(state_.swing_foot.x(), state_.swing_foot.y());
    if (support && state_.swing_foot.z() <= support->z) {
      state_.swing_foot.z() = support->z;
      int landed = support->step_index;
      if (landed < 0) {
        // Terrain contact: legality by horizontal distance to the targets.
        if (within_disc(target_before, state_.swing_foot.x(), state_.swing_foot.y())) {
          landed = target_index_before;
        } else {
          result.done = true;
          result.failed = true;
          result.fail_reason = "terrain contact outside the target disc";
        }
      }
      if (!result.failed) {
        if (landed > target_index_before) {
          result.done = true;
          result.failed = true;
          result.fail_reason = "stepped beyond the current target";
        } else {
          const bool success = landed == target_index_before;
          if (success) {
            const double d = (state_.swing_foot - target_before.center).norm();
            result.reward.target = target_reward(d, true, cfg_.reward);
            result.target_contact = true;
            ++state_.contacts;
          }
          // The landed foot becomes the stance; the old stance stays planted
          // on its step until lifted.
          std::swap(state_.stance_foot, state_.swing_foot);
          state_.swing_support = state_.stance_step;
          state_.stance_step = landed;
          state_.stance_contact = true;
          state_.swing_contact = true;
          if (success) {
            on_target_contact(seq_, cfg_.look_ahead_delay, seq_cfg_, sampler_, rng);
          }
        }
      }
    }
  }

  // Reward terms.
  if (seq_.has_target()) {
    const double d_cur = (state_.root_pos - seq_.target().center).head<2>().norm();
    if (state_.prev_target == seq_.target_index) {
      result.reward.progress = progress_reward(state_.prev_target_dist, d_cur, cfg_.dt);
    }
    state_.prev_target = seq_.target_index;
    state_.prev_target_dist = d_cur;
  }
  {
    const double rates[kActDim] = {cfg_.swing_speed * a[0], cfg_.swing_speed * a[1],
                                   cfg_.swing_speed * a[2], cfg_.lean_accel * a[3],
                                   cfg_.lean_accel * a[4]};
    const double acts[kActDim] = {a[0], a[1], a[2], a[3], a[4]};
    result.reward.energy = energy_penalty({std::span(acts), std::span(rates)}, cfg_.reward);
    static constexpr std::pair<double, double> kUnit{-1.0, 1.0};
    const std::pair<double, double> limits[kActDim] = {kUnit, kUnit, kUnit, kUnit, kUnit};
    result.reward.limit = limit_penalty(std::span(acts), std::span(limits), cfg_.reward);
  }
  {
    const Vec3 lean = rotate_z(-state_.yaw, state_.root_pos - state_.stance_foot);
    const double alpha_x = std::atan2(lean.y(), cfg_.rest_height);
    const double alpha_y = std::atan2(lean.x(), cfg_.rest_height);
    result.reward.posture = posture_penalty(alpha_x, alpha_y, cfg_.reward);
  }
  result.reward.speed = speed_penalty(state_.root_vel.norm(), cfg_.reward);

  // Failure checks.
  if (!result.done) {
    const double d_stance = (state_.root_pos - state_.stance_foot).norm();
    double d_planted = d_stance;
    if (state_.swing_support >= 0 || state_.swing_contact) {
      d_planted = std::min(d_planted, (state_.root_pos - state_.swing_foot).norm());
    }
    if (d_planted > cfg_.leg_length) {
      result.done = true;
      result.failed = true;
      result.fail_reason = "stance leg overextended";
    }
  }
  if (!result.done) {
    const auto [bonus, terminate] =
        alive_check(state_.root_pos.z() - lower_foot_z(), cfg_.reward);
    result.reward.alive = bonus;
    if (terminate) {
      result.done = true;
      result.failed = true;
      result.fail_reason = "root height below limit";
    }
  }
  if (!state_.root_pos.allFinite() || !state_.root_vel.allFinite() ||
      !state_.swing_foot.allFinite()) {
    result.done = true;
    result.failed = true;
    result.fail_reason = "non-finite state";
  }

  ++state_.tick;
  if (!result.done && state_.tick >= cfg_.tick_budget) result.done = true;
  if (!result.done && !seq_.has_target()) result.done = true;  // horizon complete

  if (result.failed) state_.alive = false;
  else if (result.done) state_.alive = false;

  result.obs = observe();
  return result;
}

Eigen::VectorXd StepperEnv::observe() const {
  const int last = static_cast<int>(seq_.steps.size()) - 1;
  const Step& t1 = seq_.steps[static_cast<std::size_t>(std::min(seq_.target_index, last))];
  const Step& t2 = seq_.steps[static_cast<std::size_t>(std::min(seq_.target_index + 1, last))];
  return observe_with_targets(t1, t2);
}

Eigen::VectorXd StepperEnv::observe_with_targets(const Step& t1, const Step& t2) const {
  Eigen::VectorXd obs(kObsDim);
  const EnvState& s = state_;
  obs[0] = s.root_pos.z() - lower_foot_z();
  obs.segment<3>(1) = rotate_z(-s.yaw, s.root_vel);
  obs.segment<3>(4) = rotate_z(-s.yaw, s.root_pos - s.stance_foot);
  obs.segment<3>(7) = rotate_z(-s.yaw, s.swing_foot - s.root_pos);
  const double dx = t1.center.x() - s.root_pos.x();
  const double dy = t1.center.y() - s.root_pos.y();
  obs[10] = (dx * dx + dy * dy < 1e-12) ? 0.0 : wrap_angle(std::atan2(dy, dx) - s.yaw);
  obs[11] = s.stance_contact ? 1.0 : 0.0;
  obs[12] = s.swing_contact ? 1.0 : 0.0;
  obs.segment<3>(13) = rotate_z(-s.yaw, t1.center - s.root_pos);
  obs.segment<3>(16) = rotate_z(-s.yaw, t2.center - s.root_pos);
  return obs;
}

}  // namespace steplab
