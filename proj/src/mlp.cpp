#include "steplab/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace steplab {

NetworkSpec NetworkSpec::actor(int obs_dim, int act_dim, std::vector<int> hidden) {
  NetworkSpec s;
  s.input = obs_dim;
  s.hidden = std::move(hidden);
  const int n = static_cast<int>(s.hidden.size());
  s.hidden_act.resize(s.hidden.size());
  for (int i = 0; i < n; ++i) {
    // First three hidden layers softsign, the rest relu.
    s.hidden_act[static_cast<std::size_t>(i)] =
        (i < 3 && i < n - 1) ? Activation::Softsign : Activation::Relu;
  }
  s.output = act_dim;
  s.output_act = Activation::Tanh;
  return s;
}

NetworkSpec NetworkSpec::critic(int obs_dim, std::vector<int> hidden) {
  NetworkSpec s;
  s.input = obs_dim;
  s.hidden = std::move(hidden);
  s.hidden_act.assign(s.hidden.size(), Activation::Relu);
  s.output = 1;
  s.output_act = Activation::Linear;
  return s;
}

int NetworkSpec::param_count() const {
  int count = 0;
  int in = input;
  for (int w : hidden) {
    count += w * in + w;
    in = w;
  }
  count += output * in + output;
  return count;
}

Eigen::MatrixXd apply_activation(Activation a, const Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::Linear: return z;
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Softsign: return z.array() / (1.0 + z.array().abs());
    case Activation::Tanh: return z.array().tanh();
  }
  return z;
}

Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::Linear: return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    case Activation::Relu:
      return (z.array() > 0.0).cast<double>();
    case Activation::Softsign: {
      const Eigen::ArrayXXd d = 1.0 + z.array().abs();
      return 1.0 / (d * d);
    }
    case Activation::Tanh: {
      const Eigen::ArrayXXd t = z.array().tanh();
      return 1.0 - t * t;
    }
  }
  return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

Mlp::Mlp(NetworkSpec spec) : spec_(std::move(spec)) {
  if (spec_.input <= 0 || spec_.output <= 0) throw std::invalid_argument("bad network spec");
  if (spec_.hidden.size() != spec_.hidden_act.size())
    throw std::invalid_argument("hidden_act size mismatch");
  int off = 0, in = spec_.input;
  for (std::size_t l = 0; l < spec_.hidden.size(); ++l) {
    const int out = spec_.hidden[l];
    slices_.push_back({off, off + out * in, out, in});
    off += out * in + out;
    acts_.push_back(spec_.hidden_act[l]);
    in = out;
  }
  slices_.push_back({off, off + spec_.output * in, spec_.output, in});
  off += spec_.output * in + spec_.output;
  acts_.push_back(spec_.output_act);
  params_ = Eigen::VectorXd::Zero(off);
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
Mlp::weight(int layer) const {
  const Slice& s = slices_[static_cast<std::size_t>(layer)];
  return {params_.data() + s.w_off, s.rows, s.cols};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(int layer) const {
  const Slice& s = slices_[static_cast<std::size_t>(layer)];
  return {params_.data() + s.b_off, s.rows};
}

void Mlp::init_params(Rng& rng) {
  for (std::size_t l = 0; l < slices_.size(); ++l) {
    const Slice& s = slices_[l];
    const bool relu = acts_[l] == Activation::Relu;
    double scale = relu ? std::sqrt(2.0 / s.cols)
                        : std::sqrt(6.0 / (s.cols + s.rows));
    if (l + 1 == slices_.size()) scale *= 0.1;  // small final layer
    for (int i = 0; i < s.rows * s.cols; ++i) {
      params_[s.w_off + i] = relu ? scale * normal01(rng)
                                  : uniform_range(rng, -scale, scale);
    }
    for (int i = 0; i < s.rows; ++i) params_[s.b_off + i] = 0.0;
  }
}

const Eigen::MatrixXd& Mlp::forward_cached(const Eigen::MatrixXd& x, Cache& cache) const {
  if (x.rows() != spec_.input) throw std::invalid_argument("input width mismatch");
  cache.input = x;
  cache.pre.resize(slices_.size());
  cache.post.resize(slices_.size());
  const Eigen::MatrixXd* a = &cache.input;
  for (std::size_t l = 0; l < slices_.size(); ++l) {
    cache.pre[l] = (weight(static_cast<int>(l)) * (*a)).colwise() + bias(static_cast<int>(l));
    cache.post[l] = apply_activation(acts_[l], cache.pre[l]);
    a = &cache.post[l];
  }
  return cache.post.back();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Cache cache;
  return forward_cached(x, cache);
}

Eigen::VectorXd Mlp::forward1(const Eigen::VectorXd& x) const {
  return forward(x);
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& doutput,
                   Eigen::VectorXd& grad, Eigen::MatrixXd* dinput) const {
  const int L = static_cast<int>(slices_.size());
  Eigen::MatrixXd delta =
      doutput.cwiseProduct(activation_derivative(acts_[static_cast<std::size_t>(L - 1)],
                                                 cache.pre[static_cast<std::size_t>(L - 1)]));
  for (int l = L - 1; l >= 0; --l) {
    const Slice& s = slices_[static_cast<std::size_t>(l)];
    const Eigen::MatrixXd& below =
        (l == 0) ? cache.input : cache.post[static_cast<std::size_t>(l - 1)];
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> dW(
        grad.data() + s.w_off, s.rows, s.cols);
    dW += delta * below.transpose();
    Eigen::Map<Eigen::VectorXd> db(grad.data() + s.b_off, s.rows);
    db += delta.rowwise().sum();
    if (l > 0) {
      delta = (weight(l).transpose() * delta)
                  .cwiseProduct(activation_derivative(acts_[static_cast<std::size_t>(l - 1)],
                                                      cache.pre[static_cast<std::size_t>(l - 1)]));
    } else if (dinput != nullptr) {
      *dinput = weight(0).transpose() * delta;
    }
  }
}

Adam::Adam(int n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -=
      lr_ * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + eps_);
}

}  // namespace steplab
