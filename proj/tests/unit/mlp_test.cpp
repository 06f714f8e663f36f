#include <doctest.h>

#include <cmath>

#include "steplab/geometry.hpp"
#include "steplab/mlp.hpp"
#include "steplab/policy.hpp"

using namespace steplab;

namespace {

// Central finite differences of a scalar loss over the parameter vector.
Eigen::VectorXd fd_gradient(Mlp& net, const std::function<double()>& loss, double h = 1e-6) {
  Eigen::VectorXd g(net.params().size());
  for (Eigen::Index i = 0; i < net.params().size(); ++i) {
    const double saved = net.params()[i];
    net.params()[i] = saved + h;
    const double up = loss();
    net.params()[i] = saved - h;
    const double down = loss();
    net.params()[i] = saved;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(1e-12, std::max(a.norm(), b.norm()));
}

NetworkSpec toy_actor() {
  NetworkSpec s;
  s.input = 4;
  s.hidden = {6, 5};
  s.hidden_act = {Activation::Softsign, Activation::Relu};
  s.output = 2;
  s.output_act = Activation::Tanh;
  return s;
}

}  // namespace

TEST_CASE("zero parameters give the zero tanh mean") {
  Mlp net(NetworkSpec::actor(4, 2, {8, 8}));
  const Eigen::VectorXd out = net.forward1(Eigen::VectorXd::Ones(4));
  CHECK(out.size() == 2);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("actor outputs stay inside (-1, 1)") {
  Mlp net(NetworkSpec::actor(4, 3, {16, 16}));
  Rng rng(5);
  net.init_params(rng);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x[j] = 10.0 * normal01(rng);
    const Eigen::VectorXd y = net.forward1(x);
    for (int k = 0; k < 3; ++k) {
      CHECK(y[k] > -1.0);
      CHECK(y[k] < 1.0);
    }
  }
}

TEST_CASE("default actor spec follows the five-layer counting") {
  const NetworkSpec s = NetworkSpec::actor(60, 21);
  CHECK(s.hidden == std::vector<int>{256, 256, 256, 256});
  CHECK(s.hidden_act == std::vector<Activation>{Activation::Softsign, Activation::Softsign,
                                                Activation::Softsign, Activation::Relu});
  CHECK(s.output_act == Activation::Tanh);
  const NetworkSpec c = NetworkSpec::critic(60);
  CHECK(c.output == 1);
  CHECK(c.output_act == Activation::Linear);
  CHECK(c.hidden_act == std::vector<Activation>(4, Activation::Relu));
}

TEST_CASE("analytic actor gradient matches central finite differences") {
  Mlp net(toy_actor());
  Rng rng(17);
  net.init_params(rng);

  Eigen::MatrixXd x(4, 3);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = normal01(rng);
  Eigen::MatrixXd w(2, 3);  // fixed linear weights making the loss scalar
  for (int i = 0; i < w.size(); ++i) w.data()[i] = normal01(rng);

  const auto loss = [&]() { return (net.forward(x).cwiseProduct(w)).sum(); };

  Mlp::Cache cache;
  net.forward_cached(x, cache);
  Eigen::VectorXd analytic = Eigen::VectorXd::Zero(net.params().size());
  net.backward(cache, w, analytic);

  const Eigen::VectorXd numeric = fd_gradient(net, loss);
  CHECK(rel_error(analytic, numeric) < 1e-6);
}

TEST_CASE("analytic critic gradient matches central finite differences") {
  Mlp net(NetworkSpec::critic(5, {7, 6}));
  Rng rng(23);
  net.init_params(rng);

  Eigen::MatrixXd x(5, 4);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = normal01(rng);
  Eigen::VectorXd targets(4);
  for (int i = 0; i < 4; ++i) targets[i] = normal01(rng);

  const auto loss = [&]() {
    const Eigen::VectorXd v = net.forward(x).row(0);
    return (v - targets).squaredNorm() / 4.0;
  };

  Mlp::Cache cache;
  const Eigen::MatrixXd v = net.forward_cached(x, cache);
  Eigen::MatrixXd dv(1, 4);
  dv.row(0) = 2.0 / 4.0 * (v.row(0).transpose() - targets).transpose();
  Eigen::VectorXd analytic = Eigen::VectorXd::Zero(net.params().size());
  net.backward(cache, dv, analytic);

  CHECK(rel_error(analytic, fd_gradient(net, loss)) < 1e-6);
}

TEST_CASE("input gradient propagates through backward") {
  Mlp net(toy_actor());
  Rng rng(3);
  net.init_params(rng);
  Eigen::MatrixXd x(4, 1);
  for (int i = 0; i < 4; ++i) x(i, 0) = normal01(rng);

  Mlp::Cache cache;
  net.forward_cached(x, cache);
  Eigen::MatrixXd dy = Eigen::MatrixXd::Ones(2, 1);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.params().size());
  Eigen::MatrixXd dx;
  net.backward(cache, dy, grad, &dx);

  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Eigen::MatrixXd xp = x, xm = x;
    xp(i, 0) += h;
    xm(i, 0) -= h;
    const double numeric = (net.forward(xp).sum() - net.forward(xm).sum()) / (2 * h);
    CHECK(dx(i, 0) == doctest::Approx(numeric).epsilon(1e-4));
  }
}

TEST_CASE("gaussian log-prob closed forms") {
  Eigen::VectorXd mean(1), logstd(1), a(1);
  mean << 0.3;
  a << 0.3;
  logstd << -1.5;
  CHECK(gaussian_logprob(mean, logstd, a) ==
        doctest::Approx(-0.5 * std::log(2.0 * kPi) + 1.5).epsilon(1e-12));
  CHECK(gaussian_logprob(mean, logstd, a) == doctest::Approx(0.5810614667953272).epsilon(1e-10));
  logstd << 0.0;
  CHECK(gaussian_logprob(mean, logstd, a) == doctest::Approx(-0.9189385332046727).epsilon(1e-10));
}

TEST_CASE("gaussian density integrates to one (Monte Carlo)") {
  Eigen::VectorXd mean(1), logstd(1);
  mean << 0.2;
  logstd << -0.5;
  Rng rng(99);
  // Importance-free estimate over a wide uniform box around the mean.
  const double lo = mean[0] - 6.0, hi = mean[0] + 6.0;
  const int n = 200000;
  double sum = 0.0;
  Eigen::VectorXd a(1);
  for (int i = 0; i < n; ++i) {
    a[0] = uniform_range(rng, lo, hi);
    sum += std::exp(gaussian_logprob(mean, logstd, a));
  }
  const double integral = sum / n * (hi - lo);
  CHECK(integral == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("adam zero gradient leaves parameters unchanged") {
  Eigen::VectorXd params = Eigen::VectorXd::Constant(5, 1.25);
  Adam opt(5, 1e-3);
  opt.step(params, Eigen::VectorXd::Zero(5));
  for (int i = 0; i < 5; ++i) CHECK(params[i] == 1.25);
}

TEST_CASE("first adam step moves by about lr in the gradient sign") {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd grad(3);
  grad << 0.5, -2.0, 1e3;
  const double lr = 1e-2;
  Adam opt(3, lr);
  opt.step(params, grad);
  for (int i = 0; i < 3; ++i) {
    // bias-corrected first step: -lr * g / (|g| + eps') ~ -lr*sign(g)
    CHECK(params[i] == doctest::Approx(-lr * (grad[i] > 0 ? 1.0 : -1.0)).epsilon(1e-4));
  }
}

TEST_CASE("adam runs are bit-identical across repeats") {
  const auto run = [] {
    Mlp net(NetworkSpec::critic(3, {8}));
    Rng rng(42);
    net.init_params(rng);
    Adam opt(static_cast<int>(net.params().size()), 1e-3);
    Eigen::MatrixXd x(3, 4);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = normal01(rng);
    for (int step = 0; step < 25; ++step) {
      Mlp::Cache cache;
      const Eigen::MatrixXd v = net.forward_cached(x, cache);
      Eigen::MatrixXd dv = v;  // regress to zero
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.params().size());
      net.backward(cache, dv, grad);
      opt.step(net.params(), grad);
    }
    return net.params();
  };
  const Eigen::VectorXd a = run(), b = run();
  REQUIRE(a.size() == b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("critic regression error decreases monotonically at small lr") {
  Mlp net(NetworkSpec::critic(2, {16}));
  Rng rng(7);
  net.init_params(rng);
  Eigen::MatrixXd x(2, 32);
  Eigen::VectorXd y(32);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = normal01(rng);
  for (int i = 0; i < 32; ++i) y[i] = std::sin(x(0, i)) + 0.5 * x(1, i);

  Adam opt(static_cast<int>(net.params().size()), 1e-3);
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 100; ++step) {
    Mlp::Cache cache;
    const Eigen::MatrixXd v = net.forward_cached(x, cache);
    const Eigen::VectorXd err = v.row(0).transpose() - y;
    const double mse = err.squaredNorm() / 32.0;
    CHECK(mse < prev + 1e-12);
    prev = mse;
    Eigen::MatrixXd dv(1, 32);
    dv.row(0) = (2.0 / 32.0) * err.transpose();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.params().size());
    net.backward(cache, dv, grad);
    opt.step(net.params(), grad);
  }
}
