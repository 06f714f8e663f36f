#pragma once

#include "steplab/stepper_env.hpp"

namespace steplab {

/// Hand-written stepping controller: lifts the swing foot, carries it along a
/// flat-topped arc to the target center, presses down through the surface,
/// and leans the root toward the next support with a PD on the lean command.
/// Exists to prove the sparse target reward is reachable; not a baseline
/// learner.
struct ScriptedConfig {
  double kp_root = 6.0;
  double kd_root = 3.5;
  double kp_swing = 6.0;
  double clearance = 0.12;        // swing apex above max(stance, target)
  double descend_radius = 0.12;   // horizontal gate before pressing down
  double press_depth = 0.08;      // aim this far below the target surface
};

class ScriptedStepper {
 public:
  explicit ScriptedStepper(ScriptedConfig cfg = {}) : cfg_(cfg) {}

  StepperEnv::Action act(const StepperEnv& env) const;

 private:
  ScriptedConfig cfg_;
};

}  // namespace steplab
