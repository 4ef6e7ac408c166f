#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harness/experiment_config.hpp"
#include "tangle/ensemble.hpp"
#include "tangle/fluid_solver.hpp"
#include "tangle/stationary.hpp"

namespace harness {

/// Process exit codes. Stable contract for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitRuntime = 2,
  kExitIo = 3,
};

/// One or more pipelines of `compare` failed; the report was still written
/// with the failures labeled.
class PipelineFailure : public std::runtime_error {
 public:
  explicit PipelineFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Writes ensemble.csv, summary.json and, with write_runs, run_<k>.csv.
tangle::EnsembleSummary cmd_simulate(const ExperimentConfig& config, std::ostream& log);

/// Writes fluid.csv and, with grid_stride > 0, fluid_grid.csv.
tangle::FluidGrid cmd_fluid(const ExperimentConfig& config, std::ostream& log);

/// Prints l, L = lambda l, residual and iterations. Writes nothing.
tangle::StationaryResult cmd_stationary(const ExperimentConfig& config, std::ostream& log);

/// Monte Carlo vs fluid vs stationary prediction on the same parameters.
struct ComparisonReport {
  nlohmann::json config;
  std::vector<std::uint64_t> seeds;
  double window_from = 0.0;
  double window_to = 0.0;
  std::optional<double> predicted_L;
  std::optional<double> predicted_l;
  std::optional<double> stationary_residual;
  std::optional<double> fluid_L;
  std::optional<double> mc_mean;
  std::optional<double> mc_std;
  /// |a - b| / b with the Monte Carlo mean as b.
  std::optional<double> prediction_vs_mc;
  std::optional<double> fluid_vs_mc;
  std::string simulate_status = "ok";
  std::string fluid_status = "ok";
  std::string stationary_status = "ok";

  bool complete() const {
    return simulate_status == "ok" && fluid_status == "ok" && stationary_status == "ok";
  }
  nlohmann::json to_json() const;
};

/// Writes ensemble.csv, fluid.csv, compare.csv (t,mc_mean,fluid_L,predicted_L)
/// and report.json. Throws PipelineFailure after writing if any pipeline failed.
ComparisonReport cmd_compare(const ExperimentConfig& config, std::ostream& log);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harness
