#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "tangle/delay_model.hpp"
#include "tangle/simulator.hpp"

namespace harness {

/// Bad or inconsistent configuration. The message names the field.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  tangle::SimConfig sim;
  std::size_t runs = 150;
  double fluid_step = 0.01;
  double lambda_ref = 20.0;
  double stationary_tol = 1e-10;
  std::optional<double> window_from;
  std::optional<double> window_to;
  std::string out_dir = "out";
  bool write_runs = false;
  /// Time stride of the t,v,g dump; 0 disables it.
  double grid_stride = 0.0;
  unsigned threads = 0;

  /// Throws ConfigError.
  void validate() const;

  double effective_window_from() const { return window_from.value_or(0.5 * sim.horizon); }
  double effective_window_to() const { return window_to.value_or(sim.horizon); }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<double> lambda;
  std::optional<double> horizon;
  std::optional<std::string> out_dir;
  std::optional<std::string> arrival;
  std::optional<double> step;
  std::optional<double> tol;
  std::optional<unsigned> threads;
  bool write_runs = false;

  std::optional<std::string> delay_type;
  std::optional<double> h;
  std::optional<double> mu;
  std::optional<double> h0;
  std::optional<double> h1;
};

/// {"type":"fixed","h":5}, {"type":"exponential","mu":0.2},
/// {"type":"uniform","h0":1,"h1":11}. Throws ConfigError on a missing or
/// malformed field and tangle::DegenerateDelay on a zero-mean law.
tangle::DelayModel delay_from_json(const nlohmann::json& j);
nlohmann::json delay_to_json(const tangle::DelayModel& delay);

/// Unknown keys are rejected. A missing seed falls back to TANGLE_SEED, then 1.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Parses and validates a config file. Syntax errors report line and column.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Starts from the file when given, otherwise from defaults (seed taken from
/// TANGLE_SEED when set), then applies the overrides and validates.
ExperimentConfig resolve_config(const std::optional<std::filesystem::path>& path,
                                const Overrides& overrides);

}  // namespace harness
