#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polysum/measures.hpp"
#include "polysum/metrics.hpp"
#include "polysum/polyroots.hpp"
#include "polysum/potential.hpp"
#include "polysum/solver.hpp"

namespace polysum {

// Configuration errors carry the offending key path.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

enum class Mode { light_tail, heavy_tail, limit_only, validate };

const char* mode_name(Mode m);

struct TermConfig {
  Measure measure;
  DegreeSequence degree;
};

struct ProbePolicy {
  std::size_t count = 100;
  double radius = 3.0;
  double exclusion = 0.05;
};

struct ExperimentConfig {
  std::string name;
  Mode mode = Mode::light_tail;
  std::vector<TermConfig> terms;
  std::vector<std::size_t> n_values;
  std::vector<std::uint64_t> seeds;
  Grid grid;
  std::vector<std::string> metrics;
  std::map<std::string, double> tolerances;
  std::filesystem::path out_dir;
  ProbePolicy probes;
  std::vector<Ball> balls;  // empty = built-in defaults
  std::optional<BumpFunction> bump;
  SolveOptions solve;
  std::size_t mc_samples = 20000;
  std::size_t ball_count = 20;  // random-ball count for light-tail runs

  // re-serialization for the summary echo (canonical key order)
  std::string echo_json() const;
};

// Parses and validates a JSON config document.  Throws ConfigError naming
// the offending key.
ExperimentConfig parse_config(const std::string& text);

}  // namespace polysum
