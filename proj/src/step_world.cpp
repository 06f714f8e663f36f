#include "steplab/step_world.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace steplab {

bool StepBounds::contains(const StepParams& p) const {
  return p.r >= r_min && p.r <= r_max && std::abs(p.psi) <= psi_max &&
         std::abs(p.theta) <= theta_max && std::abs(p.phi_x) <= phi_max &&
         std::abs(p.phi_y) <= phi_max;
}

double surface_height(const Step& s, double x, double y) {
  const double dx = x - s.center.x();
  const double dy = y - s.center.y();
  const double c = std::cos(s.heading), sn = std::sin(s.heading);
  const double xl = c * dx + sn * dy;
  const double yl = -sn * dx + c * dy;
  return s.center.z() + std::tan(s.surface_pitch) * xl + std::tan(s.surface_roll) * yl;
}

bool within_disc(const Step& s, double x, double y) {
  const double dx = x - s.center.x();
  const double dy = y - s.center.y();
  return dx * dx + dy * dy <= s.radius * s.radius;
}

Step place_step(const Step& prev, const StepParams& p) {
  Step next;
  next.heading = wrap_angle(prev.heading + p.psi);
  const double ct = std::cos(p.theta);
  next.center = prev.center + p.r * Vec3(ct * std::cos(next.heading),
                                         ct * std::sin(next.heading),
                                         std::sin(p.theta));
  next.surface_roll = p.phi_x;
  next.surface_pitch = p.phi_y;
  next.radius = prev.radius;
  return next;
}

Step generate_next_step(const Step& prev, const StepParams& p, const StepBounds& bounds) {
  if (!bounds.contains(p)) {
    std::ostringstream msg;
    msg << "step parameters out of bounds: r=" << p.r << " psi=" << p.psi
        << " theta=" << p.theta << " phi_x=" << p.phi_x << " phi_y=" << p.phi_y;
    throw std::invalid_argument(msg.str());
  }
  return place_step(prev, p);
}

namespace {

void extend_lookahead(StepSequence& seq, const SequenceConfig& cfg,
                      const StepSampler& sampler, Rng& rng) {
  const int wanted = seq.target_index + 2;  // indices [target, target+1] visible
  while (static_cast<int>(seq.steps.size()) < wanted) {
    if (seq.horizon > 0 && static_cast<int>(seq.steps.size()) >= seq.horizon) break;
    seq.steps.push_back(generate_next_step(seq.steps.back(), sampler(rng), cfg.bounds));
  }
}

void advance_target(StepSequence& seq, const SequenceConfig& cfg,
                    const StepSampler& sampler, Rng& rng) {
  seq.advance_pending = false;
  seq.delay_counter = 0;
  ++seq.target_index;
  extend_lookahead(seq, cfg, sampler, rng);
}

}  // namespace

StepSequence init_sequence(const SequenceConfig& cfg, const StepSampler& sampler, Rng& rng) {
  if (cfg.horizon != 0 && cfg.horizon < 3) {
    throw std::invalid_argument("sequence horizon must be 0 (unbounded) or >= 3");
  }
  StepSequence seq;
  seq.horizon = cfg.horizon;
  const double half = 0.5 * cfg.foot_spacing;

  Step left;
  left.center = {0.0, half, cfg.start_offset_z};
  left.radius = cfg.step_radius;
  Step right = left;
  right.center.y() = -half;

  Step third;
  third.center = {cfg.first_step_length, 0.0, 0.0};
  third.heading = 0.0;
  third.radius = cfg.step_radius;

  seq.steps = {left, right, third};
  seq.target_index = 2;
  extend_lookahead(seq, cfg, sampler, rng);
  return seq;
}

void on_target_contact(StepSequence& seq, int look_ahead_delay,
                       const SequenceConfig& cfg, const StepSampler& sampler, Rng& rng) {
  if (seq.advance_pending) return;  // a replacement is already scheduled
  seq.advance_pending = true;
  seq.delay_counter = look_ahead_delay;
  if (look_ahead_delay == 0) advance_target(seq, cfg, sampler, rng);
}

void tick_sequence(StepSequence& seq, const SequenceConfig& cfg,
                   const StepSampler& sampler, Rng& rng) {
  if (!seq.advance_pending) return;
  if (seq.delay_counter > 0) {
    --seq.delay_counter;
    if (seq.delay_counter == 0) advance_target(seq, cfg, sampler, rng);
  }
}

TargetObservation observe_targets(const Vec3& root_position, double root_yaw,
                                  const StepSequence& seq) {
  const int last = static_cast<int>(seq.steps.size()) - 1;
  const Step& s1 = seq.steps[static_cast<std::size_t>(std::min(seq.target_index, last))];
  const Step& s2 = seq.steps[static_cast<std::size_t>(std::min(seq.target_index + 1, last))];
  TargetObservation obs;
  obs.t1 = rotate_z(-root_yaw, s1.center - root_position);
  obs.t2 = rotate_z(-root_yaw, s2.center - root_position);
  return obs;
}

void write_steps(std::ostream& os, const StepSequence& seq) {
  os.precision(17);
  for (const Step& s : seq.steps) {
    os << s.center.x() << ' ' << s.center.y() << ' ' << s.center.z() << ' '
       << s.heading << ' ' << s.surface_roll << ' ' << s.surface_pitch << ' '
       << s.radius << '\n';
  }
}

StepSequence read_steps(std::istream& is) {
  StepSequence seq;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Step s;
    if (!(ls >> s.center.x() >> s.center.y() >> s.center.z() >> s.heading >>
          s.surface_roll >> s.surface_pitch >> s.radius)) {
      throw std::runtime_error("malformed step line: " + line);
    }
    seq.steps.push_back(s);
  }
  if (seq.steps.size() < 3) throw std::runtime_error("step file needs at least 3 steps");
  seq.target_index = 2;
  seq.horizon = static_cast<int>(seq.steps.size());
  return seq;
}

}  // namespace steplab
