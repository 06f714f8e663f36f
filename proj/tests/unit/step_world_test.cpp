#include <doctest.h>

#include <cmath>
#include <sstream>

#include "steplab/step_world.hpp"

using namespace steplab;

namespace {

StepSampler fixed_sampler(StepParams p) {
  return [p](Rng&) { return p; };
}

StepSampler straight_sampler(double r = 0.7) {
  StepParams p;
  p.r = r;
  return fixed_sampler(p);
}

}  // namespace

TEST_CASE("generate_next_step identity direction") {
  Step prev;
  StepParams p;
  p.r = 1.0;
  const Step next = generate_next_step(prev, p, StepBounds{});
  CHECK(next.center.x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(next.center.y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(next.center.z() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(next.heading == doctest::Approx(0.0));
}

TEST_CASE("generate_next_step yaw and pitch trigonometry") {
  Step prev;
  StepParams p;
  p.r = 1.0;
  p.psi = deg2rad(20.0);
  Step next = generate_next_step(prev, p, StepBounds{});
  CHECK(next.center.x() == doctest::Approx(0.9396926207859084).epsilon(1e-12));
  CHECK(next.center.y() == doctest::Approx(0.3420201433256687).epsilon(1e-12));
  CHECK(next.heading == doctest::Approx(deg2rad(20.0)));

  StepParams q;
  q.r = 0.8;
  q.theta = deg2rad(50.0);
  next = generate_next_step(prev, q, StepBounds{});
  CHECK(next.center.x() == doctest::Approx(0.8 * std::cos(deg2rad(50.0))).epsilon(1e-12));
  CHECK(next.center.x() == doctest::Approx(0.5142300877492314).epsilon(1e-9));
  CHECK(next.center.y() == doctest::Approx(0.0));
  CHECK(next.center.z() == doctest::Approx(0.6128355544951824).epsilon(1e-9));
}

TEST_CASE("generate_next_step rejects out-of-bounds parameters") {
  Step prev;
  StepParams p;
  p.r = 2.0;  // beyond r_max
  CHECK_THROWS_AS(generate_next_step(prev, p, StepBounds{}), std::invalid_argument);
  StepParams q;
  q.psi = deg2rad(30.0);
  CHECK_THROWS_AS(generate_next_step(prev, q, StepBounds{}), std::invalid_argument);
}

TEST_CASE("init_sequence fixed prefix") {
  SequenceConfig cfg;
  Rng rng(7);
  const StepSequence seq = init_sequence(cfg, straight_sampler(), rng);
  REQUIRE(seq.steps.size() >= 4);
  CHECK(seq.steps[0].center.z() == doctest::Approx(-0.01));
  CHECK(seq.steps[1].center.z() == doctest::Approx(-0.01));
  CHECK(seq.steps[2].center.z() == doctest::Approx(0.0));   // third step flat
  CHECK(seq.steps[2].heading == doctest::Approx(0.0));      // and straight ahead
  CHECK(seq.target_index == 2);

  SequenceConfig short_cfg;
  short_cfg.horizon = 3;
  Rng rng2(7);
  const StepSequence fixed_only = init_sequence(short_cfg, straight_sampler(), rng2);
  CHECK(fixed_only.steps.size() == 3);  // exactly the fixed prefix
}

TEST_CASE("init_sequence is deterministic in the rng seed") {
  SequenceConfig cfg;
  cfg.horizon = 20;
  StepParams p;
  p.r = 0.7;
  const StepSampler sampler = [&p](Rng& rng) {
    StepParams q = p;
    q.psi = uniform_range(rng, -0.3, 0.3);
    q.theta = uniform_range(rng, -0.5, 0.5);
    return q;
  };
  Rng a(123), b(123);
  StepSequence sa = init_sequence(cfg, sampler, a);
  StepSequence sb = init_sequence(cfg, sampler, b);
  while (static_cast<int>(sa.steps.size()) < cfg.horizon) {
    on_target_contact(sa, 0, cfg, sampler, a);
    on_target_contact(sb, 0, cfg, sampler, b);
  }
  REQUIRE(sa.steps.size() == sb.steps.size());
  for (std::size_t i = 0; i < sa.steps.size(); ++i) {
    CHECK(sa.steps[i].center == sb.steps[i].center);
    CHECK(sa.steps[i].heading == sb.steps[i].heading);
  }
}

TEST_CASE("look-ahead delay semantics") {
  SequenceConfig cfg;
  Rng rng(3);

  SUBCASE("delay 0 advances on the same tick") {
    StepSequence seq = init_sequence(cfg, straight_sampler(), rng);
    on_target_contact(seq, 0, cfg, straight_sampler(), rng);
    CHECK(seq.target_index == 3);
    CHECK_FALSE(seq.advance_pending);
  }

  SUBCASE("delay 30: observation changes exactly on the 30th tick") {
    StepSequence seq = init_sequence(cfg, straight_sampler(), rng);
    const Vec3 root(0.0, 0.0, 0.95);
    on_target_contact(seq, 30, cfg, straight_sampler(), rng);
    const TargetObservation before = observe_targets(root, 0.0, seq);
    for (int tick = 1; tick <= 29; ++tick) {
      tick_sequence(seq, cfg, straight_sampler(), rng);
      const TargetObservation obs = observe_targets(root, 0.0, seq);
      CHECK(obs.t1 == before.t1);  // frozen during the delay
    }
    tick_sequence(seq, cfg, straight_sampler(), rng);  // 30th tick
    const TargetObservation after = observe_targets(root, 0.0, seq);
    CHECK(after.t1 != before.t1);
    CHECK(seq.target_index == 3);
  }

  SUBCASE("second contact during a pending delay is ignored") {
    StepSequence seq = init_sequence(cfg, straight_sampler(), rng);
    on_target_contact(seq, 30, cfg, straight_sampler(), rng);
    for (int tick = 0; tick < 5; ++tick) tick_sequence(seq, cfg, straight_sampler(), rng);
    on_target_contact(seq, 30, cfg, straight_sampler(), rng);  // ignored
    int advanced = 0;
    for (int tick = 0; tick < 100; ++tick) {
      const int before = seq.target_index;
      tick_sequence(seq, cfg, straight_sampler(), rng);
      if (seq.target_index != before) ++advanced;
    }
    CHECK(advanced == 1);
    CHECK(seq.target_index == 3);
  }
}

TEST_CASE("observe_targets rotates into the root frame") {
  SequenceConfig cfg;
  cfg.first_step_length = 1.0;
  cfg.horizon = 4;
  Rng rng(1);
  StepSequence seq = init_sequence(cfg, straight_sampler(), rng);

  TargetObservation obs = observe_targets({0, 0, 0}, 0.0, seq);
  CHECK(obs.t1.x() == doctest::Approx(1.0));
  CHECK(obs.t1.y() == doctest::Approx(0.0));

  obs = observe_targets({0, 0, 0}, deg2rad(90.0), seq);
  CHECK(obs.t1.x() == doctest::Approx(0.0));
  CHECK(obs.t1.y() == doctest::Approx(-1.0));

  seq.steps[2].center = {2.0, 1.0, 0.5};
  obs = observe_targets({1.0, 1.0, 0.0}, 0.0, seq);
  CHECK(obs.t1.x() == doctest::Approx(1.0));
  CHECK(obs.t1.y() == doctest::Approx(0.0));
  CHECK(obs.t1.z() == doctest::Approx(0.5));
}

TEST_CASE("chained straight generation is collinear and evenly spaced") {
  Step prev;
  StepParams p;
  p.r = 0.8;
  Step cur = prev;
  for (int i = 1; i <= 10; ++i) {
    cur = generate_next_step(cur, p, StepBounds{});
    CHECK(cur.center.x() == doctest::Approx(0.8 * i).epsilon(1e-12));
    CHECK(cur.center.y() == doctest::Approx(0.0));
    CHECK(cur.center.z() == doctest::Approx(0.0));
  }
}

TEST_CASE("yaw closure and height telescoping") {
  Rng rng(99);
  Step cur;
  double psi_sum = 0.0, height_sum = 0.0;
  const StepBounds bounds;
  for (int i = 0; i < 50; ++i) {
    StepParams p;
    p.r = uniform_range(rng, bounds.r_min, bounds.r_max);
    p.psi = uniform_range(rng, -bounds.psi_max, bounds.psi_max);
    p.theta = uniform_range(rng, -bounds.theta_max, bounds.theta_max);
    psi_sum += p.psi;
    height_sum += p.r * std::sin(p.theta);
    cur = generate_next_step(cur, p, bounds);
  }
  CHECK(wrap_angle(cur.heading - wrap_angle(psi_sum)) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(cur.center.z() == doctest::Approx(height_sum).epsilon(1e-9));
}

TEST_CASE("world-frame rotation leaves target observations invariant") {
  Rng rng(5);
  SequenceConfig cfg;
  cfg.horizon = 12;
  const StepSampler sampler = [](Rng& r) {
    StepParams p;
    p.r = uniform_range(r, 0.65, 0.8);
    p.psi = uniform_range(r, -0.3, 0.3);
    p.theta = uniform_range(r, -0.7, 0.7);
    return p;
  };
  StepSequence seq = init_sequence(cfg, sampler, rng);
  while (seq.target_index < 6) on_target_contact(seq, 0, cfg, sampler, rng);

  const Vec3 root(0.4, -0.2, 0.9);
  const double yaw = 0.3;
  const TargetObservation base = observe_targets(root, yaw, seq);

  for (double alpha : {0.5, 1.3, -2.2, 3.0}) {
    StepSequence rotated = seq;
    for (Step& s : rotated.steps) {
      s.center = rotate_z(alpha, s.center);
      s.heading = wrap_angle(s.heading + alpha);
    }
    const TargetObservation obs = observe_targets(rotate_z(alpha, root), yaw + alpha, rotated);
    CHECK(obs.t1.x() == doctest::Approx(base.t1.x()).epsilon(1e-9));
    CHECK(obs.t1.y() == doctest::Approx(base.t1.y()).epsilon(1e-9));
    CHECK(obs.t1.z() == doctest::Approx(base.t1.z()).epsilon(1e-9));
    CHECK(obs.t2.x() == doctest::Approx(base.t2.x()).epsilon(1e-9));
  }
}

TEST_CASE("step sequence text round trip") {
  SequenceConfig cfg;
  cfg.horizon = 8;
  Rng rng(17);
  const StepSampler sampler = [](Rng& r) {
    StepParams p;
    p.r = uniform_range(r, 0.65, 1.2);
    p.psi = uniform_range(r, -0.3, 0.3);
    p.phi_x = uniform_range(r, -0.3, 0.3);
    p.phi_y = uniform_range(r, -0.3, 0.3);
    return p;
  };
  StepSequence seq = init_sequence(cfg, sampler, rng);
  while (static_cast<int>(seq.steps.size()) < 8) on_target_contact(seq, 0, cfg, sampler, rng);

  std::stringstream ss;
  write_steps(ss, seq);
  const StepSequence back = read_steps(ss);
  REQUIRE(back.steps.size() == seq.steps.size());
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    CHECK(back.steps[i].center == seq.steps[i].center);
    CHECK(back.steps[i].heading == seq.steps[i].heading);
    CHECK(back.steps[i].surface_roll == seq.steps[i].surface_roll);
    CHECK(back.steps[i].radius == seq.steps[i].radius);
  }
}
