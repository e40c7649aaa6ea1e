#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polysum/config.hpp"

namespace polysum {

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides the config
  int threads = 0;                               // 0 = hardware concurrency
  std::uint64_t seed_offset = 0;                 // shifts all seeds
};

struct RunReport {
  bool passed = false;
  std::string summary_json;  // the exact bytes written to summary.json
  std::vector<std::filesystem::path> manifest;
  std::filesystem::path out_dir;
};

// Runs every (n, seed) cell of the experiment, writes roots.csv /
// rho_grid.csv / summary.json under the output directory and reports
// whether all configured tolerances held.  Cells run in parallel; output
// bytes are independent of the thread count.
RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace polysum
