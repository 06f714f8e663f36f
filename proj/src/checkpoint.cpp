#include "steplab/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace steplab {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;

// On-disk numbers are little-endian; this implementation targets LE hosts.
template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_vector(std::ostream& os, const Eigen::VectorXd& v) {
  put<std::uint64_t>(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(v.size())));
}

Eigen::VectorXd get_vector(std::istream& is) {
  const auto n = get<std::uint64_t>(is);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_spec(std::ostream& os, const NetworkSpec& s) {
  put<std::int32_t>(os, s.input);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.hidden.size()));
  for (int w : s.hidden) put<std::int32_t>(os, w);
  for (Activation a : s.hidden_act) put<std::int32_t>(os, static_cast<std::int32_t>(a));
  put<std::int32_t>(os, s.output);
  put<std::int32_t>(os, static_cast<std::int32_t>(s.output_act));
}

NetworkSpec get_spec(std::istream& is) {
  NetworkSpec s;
  s.input = get<std::int32_t>(is);
  const auto n = get<std::uint32_t>(is);
  s.hidden.resize(n);
  s.hidden_act.resize(n);
  for (auto& w : s.hidden) w = get<std::int32_t>(is);
  for (auto& a : s.hidden_act) a = static_cast<Activation>(get<std::int32_t>(is));
  s.output = get<std::int32_t>(is);
  s.output_act = static_cast<Activation>(get<std::int32_t>(is));
  return s;
}

void put_adam(std::ostream& os, const Adam& a) {
  put<double>(os, a.lr());
  put<std::int64_t>(os, a.t());
  put_vector(os, const_cast<Adam&>(a).m());
  put_vector(os, const_cast<Adam&>(a).v());
}

Adam get_adam(std::istream& is, int n) {
  const double lr = get<double>(is);
  const auto t = get<std::int64_t>(is);
  Adam a(n, lr);
  a.set_t(t);
  a.m() = get_vector(is);
  a.v() = get_vector(is);
  if (a.m().size() != n || a.v().size() != n) throw std::runtime_error("adam state size mismatch");
  return a;
}

}  // namespace

void save_checkpoint(const std::string& path, const PolicyBundle& policy,
                     const AdamPair& opt, const CheckpointMeta& meta) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint64_t>(os, meta.config_hash);
  put<std::uint32_t>(os, meta.iteration);
  put<std::uint64_t>(os, meta.seed);
  put_spec(os, policy.actor.spec());
  put_spec(os, policy.critic.spec());
  put_vector(os, policy.logstd);
  put<std::uint8_t>(os, policy.obs_norm.enabled ? 1 : 0);
  put<double>(os, policy.obs_norm.count);
  put_vector(os, policy.obs_norm.mean);
  put_vector(os, policy.obs_norm.var);
  put_vector(os, policy.actor.params());
  put_vector(os, policy.critic.params());
  put_adam(os, opt.actor);
  put_adam(os, opt.critic);
  if (!os) throw std::runtime_error("failed writing checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || magic[0] != 'S' || magic[1] != 'L' || magic[2] != 'C' || magic[3] != 'P') {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("checkpoint version mismatch");
  CheckpointMeta meta;
  meta.config_hash = get<std::uint64_t>(is);
  meta.iteration = get<std::uint32_t>(is);
  meta.seed = get<std::uint64_t>(is);
  NetworkSpec actor_spec = get_spec(is);
  NetworkSpec critic_spec = get_spec(is);
  Eigen::VectorXd logstd = get_vector(is);
  PolicyBundle policy(actor_spec, critic_spec, 0.0, true);
  policy.logstd = logstd;
  policy.obs_norm.enabled = get<std::uint8_t>(is) != 0;
  policy.obs_norm.count = get<double>(is);
  policy.obs_norm.mean = get_vector(is);
  policy.obs_norm.var = get_vector(is);
  policy.actor.params() = get_vector(is);
  policy.critic.params() = get_vector(is);
  if (policy.actor.params().size() != actor_spec.param_count() ||
      policy.critic.params().size() != critic_spec.param_count()) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  AdamPair opt{get_adam(is, actor_spec.param_count()), get_adam(is, critic_spec.param_count())};
  return {std::move(policy), std::move(opt), meta};
}

LoadedCheckpoint load_checkpoint_expecting(const std::string& path,
                                           const NetworkSpec& expected_actor,
                                           const NetworkSpec& expected_critic) {
  LoadedCheckpoint loaded = load_checkpoint(path);
  if (!(loaded.policy.actor.spec() == expected_actor) ||
      !(loaded.policy.critic.spec() == expected_critic)) {
    throw std::runtime_error("checkpoint network spec does not match the configuration: " + path);
  }
  return loaded;
}

}  // namespace steplab
