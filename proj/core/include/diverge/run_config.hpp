#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diverge/ctm_sim.hpp"

namespace diverge {

struct VerifySection {
  double tolerance = 5e-3;
  /// When positive, the run is repeated at this coarser resolution and the
  /// fine run must be strictly closer to the analytical states.
  int coarse_cells = 0;
};

struct ConvergeSection {
  std::vector<int> resolutions{40, 80, 160};
  /// N = steps_per_cell * M keeps dt / dx fixed across resolutions.
  int steps_per_cell = 40;
  /// Snapshots used for the eps series; must divide N for every resolution.
  int epsilon_samples = 160;
  /// Model run alongside the configured one; Daganzo with the same split if unset.
  std::optional<DivergeModel> against;
};

struct FluxMapSection {
  /// Fixed upstream demand; negative means C0.
  double demand = -1.0;
  int grid_points = 41;
};

struct PropsSection {
  int random_inputs = 10000;
  int oracle_grid = 15;
};

/// A parsed run-configuration file. See docs/config.md for the schema.
struct ExperimentConfig {
  std::uint64_t seed = 20090220;
  SimConfig sim;
  VerifySection verify;
  ConvergeSection converge;
  FluxMapSection flux_map;
  PropsSection props;
  /// FNV-1a of the file text.
  std::uint64_t config_hash = 0;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

/// Throws ConfigError with the offending key on malformed input.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace diverge
