#pragma once

#include <cstdint>
#include <string>

#include "steplab/policy.hpp"
#include "steplab/ppo.hpp"

namespace steplab {

/// Versioned binary checkpoint: metadata header (config hash, iteration,
/// seed), network specs, normalizer state, Adam moments, and flat
/// little-endian f64 parameter arrays.
struct CheckpointMeta {
  std::uint64_t config_hash = 0;
  std::uint32_t iteration = 0;
  std::uint64_t seed = 0;
};

void save_checkpoint(const std::string& path, const PolicyBundle& policy,
                     const AdamPair& opt, const CheckpointMeta& meta);

struct LoadedCheckpoint {
  PolicyBundle policy;
  AdamPair opt;
  CheckpointMeta meta;
};

/// Throws std::runtime_error on malformed files or version mismatch.
LoadedCheckpoint load_checkpoint(const std::string& path);

/// Loads and rejects checkpoints whose network specs disagree with `expected`.
LoadedCheckpoint load_checkpoint_expecting(const std::string& path,
                                           const NetworkSpec& expected_actor,
                                           const NetworkSpec& expected_critic);

}  // namespace steplab
