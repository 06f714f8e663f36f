#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "steplab/geometry.hpp"
#include "steplab/rng.hpp"

namespace steplab {

/// Relative description of one step: spherical placement parameters plus the
/// surface tilt of the foothold itself.
struct StepParams {
  double r = 0.725;    // step length, m
  double psi = 0.0;    // yaw relative to previous step, rad
  double theta = 0.0;  // pitch (elevation) relative to previous step, rad
  double phi_x = 0.0;  // foothold surface roll, rad
  double phi_y = 0.0;  // foothold surface pitch, rad
};

struct StepBounds {
  double r_min = 0.65;
  double r_max = 1.5;
  double psi_max = deg2rad(20.0);
  double theta_max = deg2rad(50.0);
  double phi_max = deg2rad(20.0);

  bool contains(const StepParams& p) const;
};

/// A realized foothold: a tilted disc in world space.
///
/// Surface convention: height over the disc is
///   z(x, y) = center.z + tan(surface_pitch) * x_l + tan(surface_roll) * y_l
/// where (x_l, y_l) are world offsets from the center rotated into the step
/// frame (x_l along `heading`). Positive pitch ascends along the heading,
/// positive roll ascends to the local left.
struct Step {
  Vec3 center{0.0, 0.0, 0.0};
  double heading = 0.0;  // yaw of the outgoing direction, (-pi, pi]
  double surface_roll = 0.0;
  double surface_pitch = 0.0;
  double radius = 0.25;
};

double surface_height(const Step& s, double x, double y);
bool within_disc(const Step& s, double x, double y);

/// Draws the parameters of the next step; bound to the active sampling
/// strategy by the caller.
using StepSampler = std::function<StepParams(Rng&)>;

struct SequenceConfig {
  StepBounds bounds;
  double step_radius = 0.25;       // foothold disc radius
  double start_offset_z = -0.01;   // start feet sit slightly below the origin
  double first_step_length = 0.725;
  double foot_spacing = 0.2;       // lateral distance between the start feet
  int horizon = 0;                 // total step count; 0 = unbounded
};

/// Ordered foothold chain plus target bookkeeping. The first three steps are
/// fixed (two under the start feet, third flat straight ahead); later steps
/// are appended lazily from the sampler, one per target advancement, keeping
/// two steps visible beyond the current target.
struct StepSequence {
  std::vector<Step> steps;
  int target_index = 2;
  int delay_counter = 0;
  bool advance_pending = false;
  int horizon = 0;  // 0 = unbounded

  bool has_target() const { return target_index < static_cast<int>(steps.size()); }
  const Step& target() const { return steps[static_cast<std::size_t>(target_index)]; }
};

/// Offsets of the two upcoming targets in the root frame (inverse-yaw rotated,
/// vertical component preserved).
struct TargetObservation {
  Vec3 t1{0.0, 0.0, 0.0};
  Vec3 t2{0.0, 0.0, 0.0};
};

/// Places the next step from spherical parameters relative to `prev`.
/// Throws std::invalid_argument when p violates `bounds`.
Step generate_next_step(const Step& prev, const StepParams& p, const StepBounds& bounds);

/// Unchecked variant for fixed/manual step construction.
Step place_step(const Step& prev, const StepParams& p);

StepSequence init_sequence(const SequenceConfig& cfg, const StepSampler& sampler, Rng& rng);

/// Registers a verified contact with the current target. Idempotent while an
/// advancement is already pending. With delay == 0 the target advances
/// immediately; otherwise it advances after `delay` calls to tick_sequence.
void on_target_contact(StepSequence& seq, int look_ahead_delay,
                       const SequenceConfig& cfg, const StepSampler& sampler, Rng& rng);

/// Per-control-tick bookkeeping; call once at the start of each tick.
void tick_sequence(StepSequence& seq, const SequenceConfig& cfg,
                   const StepSampler& sampler, Rng& rng);

TargetObservation observe_targets(const Vec3& root_position, double root_yaw,
                                  const StepSequence& seq);

/// Line-oriented text format: `x y z heading roll pitch radius` per step.
void write_steps(std::ostream& os, const StepSequence& seq);
StepSequence read_steps(std::istream& is);

}  // namespace steplab
