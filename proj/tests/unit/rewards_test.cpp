#include <doctest.h>

#include <cmath>
#include <vector>

#include "steplab/rewards.hpp"
#include "steplab/rng.hpp"

using namespace steplab;

namespace {

// Independent re-implementations used as oracles; kept deliberately separate
// from the library code paths (scalar loops, literal constants).
namespace oracle {

double target(double d, bool contacted, double k_target, double k_d) {
  if (!contacted) return 0.0;
  return k_target * std::pow(M_E, -(d / k_d));
}

double progress(double d_prev, double d_cur, double dt) {
  return d_prev / dt - d_cur / dt;
}

double energy(const std::vector<double>& a, const std::vector<double>& v) {
  double s1 = 0.0, s2 = 0.0;
  const double n = static_cast<double>(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    s1 += std::fabs(a[j]) * std::fabs(v[j]);
    s2 += std::fabs(a[j]) * std::fabs(a[j]);
  }
  return -(4.5 / n) * s1 - (0.225 / n) * s2;
}

double limit(const std::vector<double>& x, const std::vector<std::pair<double, double>>& lim) {
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double mid = (lim[j].first + lim[j].second) / 2.0;
    const double lo = mid + (lim[j].first - mid) * 0.99;
    const double hi = mid + (lim[j].second - mid) * 0.99;
    const bool inside = x[j] >= lo && x[j] <= hi;
    if (!inside) total -= 0.1;
  }
  return total;
}

double posture(double ax, double ay) {
  double r = 0.0;
  const bool roll_ok = -0.4 <= ax && ax <= 0.4;
  const bool pitch_ok = -0.2 <= ay && ay <= 0.4;
  if (!roll_ok) r -= std::fabs(ax);
  if (!pitch_ok) r -= std::fabs(ay);
  return r;
}

double speed(double v) { return v > 1.6 ? -(v - 1.6) : 0.0; }

std::pair<double, bool> alive(double h) {
  return h >= 0.7 ? std::make_pair(2.0, false) : std::make_pair(0.0, true);
}

}  // namespace oracle

bool close(double a, double b, double rel = 1e-12) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
  return std::fabs(a - b) <= rel * scale;
}

}  // namespace

TEST_CASE("target reward worked examples") {
  RewardConfig cfg;
  CHECK(target_reward(0.0, true, cfg) == doctest::Approx(50.0));
  CHECK(target_reward(0.25, true, cfg) == doctest::Approx(50.0 * std::exp(-1.0)));
  CHECK(target_reward(0.25, true, cfg) == doctest::Approx(18.393972058572117));
  CHECK(target_reward(0.1, false, cfg) == 0.0);
}

TEST_CASE("target reward is monotone, continuous, bounded") {
  RewardConfig cfg;
  double prev = target_reward(0.0, true, cfg);
  CHECK(prev <= cfg.k_target);
  for (double d = 0.01; d < 3.0; d += 0.01) {
    const double cur = target_reward(d, true, cfg);
    CHECK(cur < prev);
    CHECK(cur >= 0.0);
    prev = cur;
  }
}

TEST_CASE("progress reward worked examples") {
  CHECK(progress_reward(1.0, 0.9, 1.0 / 60.0) == doctest::Approx(6.0));
  CHECK(progress_reward(0.5, 0.5, 1.0 / 60.0) == 0.0);
  CHECK(progress_reward(0.9, 1.0, 1.0 / 60.0) == doctest::Approx(-6.0));
}

TEST_CASE("progress telescopes over a constant target") {
  Rng rng(11);
  const double dt = 1.0 / 30.0;
  std::vector<double> d{1.7};
  for (int i = 0; i < 40; ++i) d.push_back(d.back() + 0.05 * (uniform01(rng) - 0.6));
  double sum = 0.0;
  for (std::size_t i = 1; i < d.size(); ++i) sum += progress_reward(d[i - 1], d[i], dt);
  CHECK(sum == doctest::Approx((d.front() - d.back()) / dt).epsilon(1e-9));
}

TEST_CASE("energy penalty worked examples") {
  RewardConfig cfg;
  const double a0[2] = {0.0, 0.0}, v0[2] = {1.0, -2.0};
  CHECK(energy_penalty({std::span(a0), std::span(v0)}, cfg) == 0.0);

  const double a1[2] = {0.5, -0.5}, v1[2] = {1.0, 1.0};
  CHECK(energy_penalty({std::span(a1), std::span(v1)}, cfg) == doctest::Approx(-2.30625));

  const double v2[2] = {2.0, 2.0};
  const double e1 = energy_penalty({std::span(a1), std::span(v1)}, cfg);
  const double e2 = energy_penalty({std::span(a1), std::span(v2)}, cfg);
  // doubling velocities doubles the work term only
  const double work1 = -4.5 * 0.5 * (std::abs(0.5 * 1.0) + std::abs(-0.5 * 1.0));
  CHECK(e2 - e1 == doctest::Approx(work1));
}

TEST_CASE("limit penalty worked examples") {
  RewardConfig cfg;
  const std::pair<double, double> unit{-1.0, 1.0};
  const std::pair<double, double> lims[3] = {unit, unit, unit};
  const double ok[3] = {0.0, 0.5, -0.9};
  CHECK(limit_penalty(std::span(ok), std::span(lims), cfg) == 0.0);
  const double bad[3] = {1.0, -0.995, 0.999};
  CHECK(limit_penalty(std::span(bad), std::span(lims), cfg) == doctest::Approx(-0.3));
  const double boundary[3] = {0.99, -0.99, 0.0};  // exactly at 99%: not counted
  CHECK(limit_penalty(std::span(boundary), std::span(lims), cfg) == 0.0);
}

TEST_CASE("posture penalty worked examples") {
  RewardConfig cfg;
  CHECK(posture_penalty(0.3, 0.0, cfg) == 0.0);
  CHECK(posture_penalty(0.5, 0.0, cfg) == doctest::Approx(-0.5));
  CHECK(posture_penalty(0.0, -0.3, cfg) == doctest::Approx(-0.3));  // asymmetric pitch band
  CHECK(posture_penalty(0.4, 0.4, cfg) == 0.0);                     // inclusive boundaries
}

TEST_CASE("speed penalty worked examples") {
  RewardConfig cfg;
  CHECK(speed_penalty(1.0, cfg) == 0.0);
  CHECK(speed_penalty(2.0, cfg) == doctest::Approx(-0.4));
  CHECK(speed_penalty(1.6, cfg) == 0.0);
}

TEST_CASE("alive check worked examples") {
  RewardConfig cfg;
  CHECK(alive_check(0.8, cfg) == std::make_pair(2.0, false));
  CHECK(alive_check(0.6, cfg) == std::make_pair(0.0, true));
  CHECK(alive_check(0.7, cfg) == std::make_pair(2.0, false));  // inclusive boundary
}

TEST_CASE("reward formula suite matches the oracle on randomized inputs") {
  RewardConfig cfg;
  Rng rng(314159);
  for (int trial = 0; trial < 10000; ++trial) {
    const double d = uniform_range(rng, 0.0, 3.0);
    const bool contacted = uniform01(rng) < 0.5;
    CHECK(close(target_reward(d, contacted, cfg), oracle::target(d, contacted, 50.0, 0.25)));

    const double dp = uniform_range(rng, 0.0, 3.0), dc = uniform_range(rng, 0.0, 3.0);
    CHECK(close(progress_reward(dp, dc, cfg.dt), oracle::progress(dp, dc, cfg.dt), 1e-11));

    const int n = uniform_int(rng, 1, 8);
    std::vector<double> a(n), v(n), x(n);
    std::vector<std::pair<double, double>> lims(n);
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = uniform_range(rng, -1.0, 1.0);
      v[static_cast<std::size_t>(j)] = uniform_range(rng, -4.0, 4.0);
      const double lo = uniform_range(rng, -2.0, 0.0);
      lims[static_cast<std::size_t>(j)] = {lo, lo + uniform_range(rng, 0.5, 2.5)};
      x[static_cast<std::size_t>(j)] = uniform_range(rng, -2.5, 2.5);
    }
    CHECK(close(energy_penalty({std::span(a), std::span(v)}, cfg), oracle::energy(a, v)));
    CHECK(close(limit_penalty(std::span(x), std::span(lims), cfg), oracle::limit(x, lims)));

    const double ax = uniform_range(rng, -1.0, 1.0), ay = uniform_range(rng, -1.0, 1.0);
    CHECK(close(posture_penalty(ax, ay, cfg), oracle::posture(ax, ay)));

    const double sp = uniform_range(rng, 0.0, 4.0);
    CHECK(close(speed_penalty(sp, cfg), oracle::speed(sp)));

    const double h = uniform_range(rng, 0.0, 1.5);
    CHECK(alive_check(h, cfg) == oracle::alive(h));

    // sign structure: penalties non-positive, bonuses non-negative
    CHECK(energy_penalty({std::span(a), std::span(v)}, cfg) <= 0.0);
    CHECK(limit_penalty(std::span(x), std::span(lims), cfg) <= 0.0);
    CHECK(posture_penalty(ax, ay, cfg) <= 0.0);
    CHECK(speed_penalty(sp, cfg) <= 0.0);
    CHECK(target_reward(d, contacted, cfg) >= 0.0);
  }
}
