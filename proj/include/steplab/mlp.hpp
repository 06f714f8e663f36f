#pragma once

#include <Eigen/Dense>
#include <vector>

#include "steplab/rng.hpp"

namespace steplab {

enum class Activation { Linear, Relu, Softsign, Tanh };

/// Feed-forward architecture description. The paper-scale default is four
/// hidden layers of 256; the actor uses softsign on the first three hidden
/// layers, relu after that, and tanh on the output, while the critic is all
/// relu with a linear scalar output.
struct NetworkSpec {
  int input = 0;
  std::vector<int> hidden;
  std::vector<Activation> hidden_act;
  int output = 0;
  Activation output_act = Activation::Linear;

  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
  int param_count() const;
  bool operator==(const NetworkSpec&) const = default;

  static NetworkSpec actor(int obs_dim, int act_dim, std::vector<int> hidden = {256, 256, 256, 256});
  static NetworkSpec critic(int obs_dim, std::vector<int> hidden = {256, 256, 256, 256});
};

/// MLP over a flat parameter vector. Layout per layer: weights row-major
/// (out x in), then biases. Gradients are hand-derived; forward/backward work
/// on column-major batches (one sample per column).
class Mlp {
 public:
  explicit Mlp(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  void init_params(Rng& rng);

  struct Cache {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> pre;   // Z_l per layer
    std::vector<Eigen::MatrixXd> post;  // act(Z_l) per layer
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd forward1(const Eigen::VectorXd& x) const;
  const Eigen::MatrixXd& forward_cached(const Eigen::MatrixXd& x, Cache& cache) const;

  /// Accumulates dL/dparams into `grad` given dL/doutput; optionally emits
  /// dL/dinput. `grad` must be zero-initialized by the caller.
  void backward(const Cache& cache, const Eigen::MatrixXd& doutput,
                Eigen::VectorXd& grad, Eigen::MatrixXd* dinput = nullptr) const;

 private:
  struct Slice {
    int w_off, b_off, rows, cols;
  };
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

  NetworkSpec spec_;
  std::vector<Slice> slices_;
  std::vector<Activation> acts_;  // per layer, output last
  Eigen::VectorXd params_;
};

Eigen::MatrixXd apply_activation(Activation a, const Eigen::MatrixXd& z);
Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z);

/// Adam with the conventional (0.9, 0.999, 1e-8) defaults.
class Adam {
 public:
  Adam(int n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }
  long t() const { return t_; }

  Eigen::VectorXd& m() { return m_; }
  Eigen::VectorXd& v() { return v_; }
  void set_t(long t) { t_ = t; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Eigen::VectorXd m_, v_;
};

}  // namespace steplab
