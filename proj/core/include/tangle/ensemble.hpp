#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tangle/simulator.hpp"

namespace tangle {

struct EnsembleOptions {
  std::size_t runs = 1;
  bool keep_trajectories = false;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Stationary averaging window. Defaults to the second half of the horizon.
  std::optional<double> window_from;
  std::optional<double> window_to;
};

/// Pointwise statistics of L(t) over independent runs on a common grid.
struct EnsembleSummary {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation, 0 for one run
  std::vector<double> min;
  std::vector<double> max;

  std::vector<std::uint64_t> seeds;
  double window_from = 0.0;
  double window_to = 0.0;
  /// Time average of L over the window, one entry per run.
  std::vector<double> window_averages;
  std::vector<SimTrajectory> runs;

  /// Mean over runs of the per-run window averages.
  double stationary_mean() const;
  /// Sample standard deviation of the per-run window averages.
  double stationary_std() const;
};

/// Run k uses seed derive_seed(config.seed, k). The result does not depend
/// on the thread count.
EnsembleSummary run_ensemble(const SimConfig& config, const EnsembleOptions& options);

}  // namespace tangle
