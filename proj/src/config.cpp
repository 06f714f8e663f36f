#include "steplab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace steplab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("expected integer for key '" + key + "': " + v);
  return static_cast<int>(d);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("invalid seed value for key '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected boolean for key '" + key + "': " + v);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\''))) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<int> to_int_list(const std::string& key, std::string v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw ConfigError("expected a list like [a, b] for key '" + key + "': " + v);
  }
  v = v.substr(1, v.size() - 2);
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_int(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
  return out;
}

void apply_key(ExperimentConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;

  if (section == "run") {
    if (key == "seed") { c.seed = to_u64(full, value); return; }
    if (key == "iterations") { c.iterations = to_int(full, value); return; }
    if (key == "workers") { c.workers = to_int(full, value); return; }
    if (key == "eval_cadence") { c.eval_cadence = to_int(full, value); return; }
    if (key == "eval_episodes") { c.eval_episodes = to_int(full, value); return; }
    if (key == "checkpoint_cadence") { c.checkpoint_cadence = to_int(full, value); return; }
    if (key == "heatmap_cadence") { c.heatmap_cadence = to_int(full, value); return; }
    if (key == "out_dir") { c.out_dir = unquote(value); return; }
    if (key == "init_checkpoint") { c.init_checkpoint = unquote(value); return; }
  } else if (section == "grid") {
    if (key == "dims") { c.grid_dims = to_int(full, value); return; }
    if (key == "resolution") { c.grid_resolution = to_int(full, value); return; }
    if (key == "r_min") { c.bounds.r_min = to_double(full, value); return; }
    if (key == "r_max") { c.bounds.r_max = to_double(full, value); return; }
    if (key == "psi_max_deg") { c.bounds.psi_max = deg2rad(to_double(full, value)); return; }
    if (key == "theta_max_deg") { c.bounds.theta_max = deg2rad(to_double(full, value)); return; }
    if (key == "phi_max_deg") { c.bounds.phi_max = deg2rad(to_double(full, value)); return; }
    if (key == "r_uniform_lo") { c.r_uniform_lo = to_double(full, value); return; }
    if (key == "r_uniform_hi") { c.r_uniform_hi = to_double(full, value); return; }
  } else if (section == "curriculum") {
    if (key == "strategy") {
      const auto s = strategy_from_name(unquote(value));
      if (!s) throw ConfigError("unknown curriculum strategy: " + value);
      c.curriculum.strategy = *s;
      return;
    }
    if (key == "reward_threshold") { c.curriculum.reward_threshold = to_double(full, value); return; }
    if (key == "beta") { c.curriculum.beta = to_double(full, value); return; }
    if (key == "k_sens") { c.curriculum.k_sens = to_double(full, value); return; }
    if (key == "eval_steps") { c.curriculum.eval_steps = to_int(full, value); return; }
    if (key == "vary_first_step") { c.curriculum.vary_first_step = to_bool(full, value); return; }
    if (key == "max_stage") { c.curriculum.max_stage = to_int(full, value); return; }
  } else if (section == "env") {
    if (key == "dt") { c.env.dt = to_double(full, value); c.env.reward.dt = c.env.dt; return; }
    if (key == "leg_length") { c.env.leg_length = to_double(full, value); return; }
    if (key == "rest_height") { c.env.rest_height = to_double(full, value); return; }
    if (key == "swing_speed") { c.env.swing_speed = to_double(full, value); return; }
    if (key == "lean_accel") { c.env.lean_accel = to_double(full, value); return; }
    if (key == "spring_k") { c.env.spring_k = to_double(full, value); return; }
    if (key == "spring_d") { c.env.spring_d = to_double(full, value); return; }
    if (key == "gravity") { c.env.gravity = to_double(full, value); return; }
    if (key == "yaw_rate") { c.env.yaw_rate = to_double(full, value); return; }
    if (key == "tick_budget") { c.env.tick_budget = to_int(full, value); return; }
    if (key == "look_ahead_delay") { c.env.look_ahead_delay = to_int(full, value); return; }
    if (key == "reset_jitter") { c.env.reset_jitter = to_double(full, value); return; }
    if (key == "k_target") { c.env.reward.k_target = to_double(full, value); return; }
    if (key == "k_d") { c.env.reward.k_d = to_double(full, value); return; }
    if (key == "speed_cap") { c.env.reward.speed_cap = to_double(full, value); return; }
    if (key == "alive_bonus") { c.env.reward.alive_bonus = to_double(full, value); return; }
    if (key == "min_root_height") { c.env.reward.min_root_height = to_double(full, value); return; }
  } else if (section == "sequence") {
    if (key == "step_radius") { c.sequence.step_radius = to_double(full, value); return; }
    if (key == "train_radius_scale") { c.train_radius_scale = to_double(full, value); return; }
    if (key == "start_offset_z") { c.sequence.start_offset_z = to_double(full, value); return; }
    if (key == "first_step_length") { c.sequence.first_step_length = to_double(full, value); return; }
    if (key == "foot_spacing") { c.sequence.foot_spacing = to_double(full, value); return; }
  } else if (section == "rl") {
    if (key == "gamma") { c.rl.gamma = to_double(full, value); return; }
    if (key == "clip_eps") { c.rl.clip_eps = to_double(full, value); return; }
    if (key == "lr") { c.rl.lr = to_double(full, value); return; }
    if (key == "minibatch") { c.rl.minibatch = to_int(full, value); return; }
    if (key == "epochs") { c.rl.epochs = to_int(full, value); return; }
    if (key == "value_loss_coeff") { c.rl.value_loss_coeff = to_double(full, value); return; }
    if (key == "normalize_advantages") { c.rl.normalize_advantages = to_bool(full, value); return; }
    if (key == "logstd") { c.rl.logstd = to_double(full, value); return; }
    if (key == "samples_per_iteration") { c.rl.samples_per_iteration = to_int(full, value); return; }
    if (key == "hidden") { c.hidden = to_int_list(full, value); return; }
  }
  throw ConfigError("unknown config key: " + full);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.sequence.bounds = cfg.bounds;
  std::istringstream is(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value on line " + std::to_string(line_no) + ": " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("expected key = value on line " + std::to_string(line_no) + ": " + line);
    }
    apply_key(cfg, section, key, value);
  }
  cfg.sequence.bounds = cfg.bounds;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

void ExperimentConfig::validate() const {
  if (grid_dims != 2 && grid_dims != 3 && grid_dims != 5)
    throw ConfigError("grid.dims must be 2, 3, or 5");
  if (grid_resolution < 3 || grid_resolution % 2 == 0)
    throw ConfigError("grid.resolution must be odd and >= 3");
  if (iterations < 0) throw ConfigError("run.iterations must be >= 0");
  if (workers < 1) throw ConfigError("run.workers must be >= 1");
  if (rl.samples_per_iteration < 1) throw ConfigError("rl.samples_per_iteration must be >= 1");
  if (rl.minibatch < 1) throw ConfigError("rl.minibatch must be >= 1");
  if (!(rl.gamma > 0.0 && rl.gamma < 1.0)) throw ConfigError("rl.gamma must lie in (0, 1)");
  if (env.tick_budget < 1) throw ConfigError("env.tick_budget must be >= 1");
  if (env.look_ahead_delay < 0) throw ConfigError("env.look_ahead_delay must be >= 0");
  if (!(bounds.r_min < bounds.r_max)) throw ConfigError("grid.r_min must be < grid.r_max");
  if (!(r_uniform_lo <= r_uniform_hi)) throw ConfigError("grid.r_uniform_lo must be <= r_uniform_hi");
  if (curriculum.beta < 0.0 || curriculum.beta > 1.0)
    throw ConfigError("curriculum.beta must lie in [0, 1]");
  if (curriculum.k_sens <= 0.0) throw ConfigError("curriculum.k_sens must be > 0");
  if (curriculum.eval_steps < 1) throw ConfigError("curriculum.eval_steps must be >= 1");
  if (sequence.step_radius <= 0.0) throw ConfigError("sequence.step_radius must be > 0");
  if (train_radius_scale <= 0.0) throw ConfigError("sequence.train_radius_scale must be > 0");
  if (hidden.empty()) throw ConfigError("rl.hidden must name at least one layer");
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "[run]\n"
     << "seed = " << c.seed << "\n"
     << "iterations = " << c.iterations << "\n"
     << "workers = " << c.workers << "\n"
     << "eval_cadence = " << c.eval_cadence << "\n"
     << "eval_episodes = " << c.eval_episodes << "\n"
     << "checkpoint_cadence = " << c.checkpoint_cadence << "\n"
     << "heatmap_cadence = " << c.heatmap_cadence << "\n"
     << "out_dir = \"" << c.out_dir << "\"\n";
  if (!c.init_checkpoint.empty()) os << "init_checkpoint = \"" << c.init_checkpoint << "\"\n";
  os << "\n[grid]\n"
     << "dims = " << c.grid_dims << "\n"
     << "resolution = " << c.grid_resolution << "\n"
     << "r_min = " << c.bounds.r_min << "\n"
     << "r_max = " << c.bounds.r_max << "\n"
     << "psi_max_deg = " << rad2deg(c.bounds.psi_max) << "\n"
     << "theta_max_deg = " << rad2deg(c.bounds.theta_max) << "\n"
     << "phi_max_deg = " << rad2deg(c.bounds.phi_max) << "\n"
     << "r_uniform_lo = " << c.r_uniform_lo << "\n"
     << "r_uniform_hi = " << c.r_uniform_hi << "\n";
  os << "\n[curriculum]\n"
     << "strategy = \"" << strategy_name(c.curriculum.strategy) << "\"\n"
     << "reward_threshold = " << c.curriculum.reward_threshold << "\n"
     << "beta = " << c.curriculum.beta << "\n"
     << "k_sens = " << c.curriculum.k_sens << "\n"
     << "eval_steps = " << c.curriculum.eval_steps << "\n"
     << "vary_first_step = " << (c.curriculum.vary_first_step ? "true" : "false") << "\n"
     << "max_stage = " << c.curriculum.max_stage << "\n";
  os << "\n[env]\n"
     << "dt = " << c.env.dt << "\n"
     << "leg_length = " << c.env.leg_length << "\n"
     << "rest_height = " << c.env.rest_height << "\n"
     << "swing_speed = " << c.env.swing_speed << "\n"
     << "lean_accel = " << c.env.lean_accel << "\n"
     << "spring_k = " << c.env.spring_k << "\n"
     << "spring_d = " << c.env.spring_d << "\n"
     << "gravity = " << c.env.gravity << "\n"
     << "yaw_rate = " << c.env.yaw_rate << "\n"
     << "tick_budget = " << c.env.tick_budget << "\n"
     << "look_ahead_delay = " << c.env.look_ahead_delay << "\n"
     << "reset_jitter = " << c.env.reset_jitter << "\n"
     << "k_target = " << c.env.reward.k_target << "\n"
     << "k_d = " << c.env.reward.k_d << "\n"
     << "speed_cap = " << c.env.reward.speed_cap << "\n"
     << "alive_bonus = " << c.env.reward.alive_bonus << "\n"
     << "min_root_height = " << c.env.reward.min_root_height << "\n";
  os << "\n[sequence]\n"
     << "step_radius = " << c.sequence.step_radius << "\n"
     << "train_radius_scale = " << c.train_radius_scale << "\n"
     << "start_offset_z = " << c.sequence.start_offset_z << "\n"
     << "first_step_length = " << c.sequence.first_step_length << "\n"
     << "foot_spacing = " << c.sequence.foot_spacing << "\n";
  os << "\n[rl]\n"
     << "gamma = " << c.rl.gamma << "\n"
     << "clip_eps = " << c.rl.clip_eps << "\n"
     << "lr = " << c.rl.lr << "\n"
     << "minibatch = " << c.rl.minibatch << "\n"
     << "epochs = " << c.rl.epochs << "\n"
     << "value_loss_coeff = " << c.rl.value_loss_coeff << "\n"
     << "normalize_advantages = " << (c.rl.normalize_advantages ? "true" : "false") << "\n"
     << "logstd = " << c.rl.logstd << "\n"
     << "samples_per_iteration = " << c.rl.samples_per_iteration << "\n"
     << "hidden = [";
  for (std::size_t i = 0; i < c.hidden.size(); ++i) {
    os << c.hidden[i] << (i + 1 < c.hidden.size() ? ", " : "");
  }
  os << "]\n";
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace steplab
