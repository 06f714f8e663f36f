#include "steplab/scripted.hpp"

#include <algorithm>
#include <cmath>

namespace steplab {

StepperEnv::Action ScriptedStepper::act(const StepperEnv& env) const {
  StepperEnv::Action a = StepperEnv::Action::Zero();
  const EnvState& s = env.state();
  const StepSequence& seq = env.sequence();
  const EnvConfig& cfg = env.config();
  if (!seq.has_target()) return a;

  const Step& target = seq.target();
  const bool settling = seq.advance_pending;  // contact made, waiting out the delay

  // Root: PD on the lean command toward the next support point.
  {
    const Vec2 p_des = settling ? Vec2(s.stance_foot.x(), s.stance_foot.y())
                                : Vec2(target.center.x(), target.center.y());
    const Vec2 err = p_des - Vec2(s.root_pos.x(), s.root_pos.y());
    const Vec2 vel(s.root_vel.x(), s.root_vel.y());
    const Vec2 b_world = cfg_.kp_root * err - cfg_.kd_root * vel;
    const Vec2 b_local = rotate_2d(-s.yaw, b_world) / cfg.lean_accel;
    a[3] = std::clamp(b_local.x(), -1.0, 1.0);
    a[4] = std::clamp(b_local.y(), -1.0, 1.0);
  }

  if (settling) return a;  // keep both feet planted while the stance settles

  // Swing foot.
  const bool planted = s.swing_support >= 0;
  if (planted) {
    a[2] = 1.0;  // lift
    return a;
  }
  const Vec2 e_xy = Vec2(target.center.x(), target.center.y()) -
                    Vec2(s.swing_foot.x(), s.swing_foot.y());
  const double dist = e_xy.norm();
  double z_des;
  if (dist > cfg_.descend_radius) {
    z_des = std::max(s.stance_foot.z(), target.center.z()) + cfg_.clearance;
  } else {
    z_des = target.center.z() - cfg_.press_depth;
  }
  const Vec2 v_xy = cfg_.kp_swing * e_xy;
  const double v_z = cfg_.kp_swing * (z_des - s.swing_foot.z());
  const Vec2 u_local = rotate_2d(-s.yaw, v_xy) / cfg.swing_speed;
  a[0] = std::clamp(u_local.x(), -1.0, 1.0);
  a[1] = std::clamp(u_local.y(), -1.0, 1.0);
  a[2] = std::clamp(v_z / cfg.swing_speed, -1.0, 1.0);
  return a;
}

}  // namespace steplab
