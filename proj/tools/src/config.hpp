#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ecps/chain.hpp"

namespace ecps::cli {

/// One experiment. Every numeric field is positive; unknown keys are rejected.
struct ExperimentConfig {
  std::string system_json;
  std::shared_ptr<const ChainSystem> system;
  std::uint64_t seed = 1;
  int depth = 12;
  /// p-adic level at which proxy distances compare cells.
  int resolution = 2;
  int extend_by = 8;
  int max_retries = 6;
  int trajectories = 4;
  std::vector<std::int64_t> checkpoints{10, 100, 1000};
  std::string functional = "one";
  std::string output = "ecps_out";
  int samples = 10000;
  int max_k = 81;
  int proxy_halfwidth = 9;
  int quad_level = 4;
  int group_depth = 3;
  int t_end = 8;

  /// Compact JSON of everything that affects results (output path excluded).
  std::string canonical() const;
  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;
};

/// Accepts a full config object or a bare system spec. Throws Error(config)
/// naming the offending key.
ExperimentConfig parse_config(std::string_view text);

}  // namespace ecps::cli
