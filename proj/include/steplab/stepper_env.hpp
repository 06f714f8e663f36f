#pragma once

#include <Eigen/Dense>
#include <optional>

#include "steplab/heightfield.hpp"
#include "steplab/rewards.hpp"
#include "steplab/rng.hpp"
#include "steplab/step_world.hpp"

namespace steplab {

struct EnvConfig {
  double dt = 1.0 / 30.0;
  double leg_length = 1.0;     // max distance root <-> nearest planted foot
  double rest_height = 0.95;   // spring rest height above the stance foot
  double swing_speed = 3.0;    // m/s per unit swing command
  double lean_accel = 5.0;     // m/s^2 per unit lean command
  double spring_k = 100.0;     // s^-2, vertical spring (critically damped with spring_d)
  double spring_d = 20.0;      // s^-1
  double gravity = 9.8;
  double yaw_rate = 5.0;       // rad/s, facing alignment toward the stance heading
  int tick_budget = 600;
  int look_ahead_delay = 15;
  double reset_jitter = 0.0;   // stddev on root position/velocity at reset
  RewardConfig reward;
};

/// Reduced-order stepper state. The root is an inverted-pendulum point mass
/// riding a vertical spring over the stance foot; the swing foot is a
/// velocity-controlled point.
struct EnvState {
  Vec3 root_pos{0, 0, 0};
  Vec3 root_vel{0, 0, 0};
  Vec3 stance_foot{0, 0, 0};
  Vec3 swing_foot{0, 0, 0};
  double yaw = 0.0;
  long tick = 0;
  bool stance_contact = true;
  bool swing_contact = true;
  int stance_step = 1;    // sequence index under the stance foot
  int swing_support = 0;  // sequence index supporting a planted swing foot, -1 airborne
  int contacts = 0;       // successful target contacts so far
  bool alive = true;
  int prev_target = -1;   // progress-reward tracking
  double prev_target_dist = 0.0;
};

struct RewardTerms {
  double target = 0.0;
  double progress = 0.0;
  double energy = 0.0;
  double limit = 0.0;
  double posture = 0.0;
  double speed = 0.0;
  double alive = 0.0;

  double total() const { return target + progress + energy + limit + posture + speed + alive; }
};

struct StepResult {
  Eigen::VectorXd obs;
  RewardTerms reward;
  bool done = false;
  bool failed = false;  // terminal failure; done && !failed is a truncation/completion
  bool target_contact = false;
  const char* fail_reason = nullptr;
};

/// Action layout: (u_x, u_y, u_z, b_x, b_y) in [-1,1]^5. Swing velocity and
/// lean commands are expressed in the facing frame and yaw-rotated into the
/// world.
class StepperEnv {
 public:
  static constexpr int kObsDim = 19;
  static constexpr int kActDim = 5;
  using Action = Eigen::Matrix<double, kActDim, 1>;

  StepperEnv(EnvConfig cfg, SequenceConfig seq_cfg, StepSampler sampler);

  /// Terrain mode: the height field is the physical surface; discrete steps
  /// remain the targets and define contact legality. Pointer not owned.
  void set_heightfield(const HeightField* field) { field_ = field; }

  void reset(Rng& rng);
  /// Reset onto a caller-provided sequence (probes, terrain runs).
  void reset_with_sequence(StepSequence seq, Rng& rng);

  StepResult step(const Action& action, Rng& rng);

  Eigen::VectorXd observe() const;
  /// Observation with the two upcoming targets replaced by arbitrary steps;
  /// used for imagined-step capability queries. Does not touch the sequence.
  Eigen::VectorXd observe_with_targets(const Step& t1, const Step& t2) const;

  const EnvState& state() const { return state_; }
  const StepSequence& sequence() const { return seq_; }
  const EnvConfig& config() const { return cfg_; }
  const SequenceConfig& sequence_config() const { return seq_cfg_; }

 private:
  struct Support {
    int step_index;  // -1 = terrain
    double z;
  };
  std::optional<Support> support_at(double x, double y) const;
  double lower_foot_z() const { return std::min(state_.stance_foot.z(), state_.swing_foot.z()); }

  EnvConfig cfg_;
  SequenceConfig seq_cfg_;
  StepSampler sampler_;
  StepSequence seq_;
  EnvState state_;
  const HeightField* field_ = nullptr;
};

}  // namespace steplab
