#include "tangle/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace tangle {
namespace {

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

double EnsembleSummary::stationary_mean() const {
  if (window_averages.empty()) return 0.0;
  double sum = 0.0;
  for (double x : window_averages) sum += x;
  return sum / static_cast<double>(window_averages.size());
}

double EnsembleSummary::stationary_std() const { return sample_std(window_averages); }

EnsembleSummary run_ensemble(const SimConfig& config, const EnsembleOptions& options) {
  if (options.runs == 0) throw std::invalid_argument("runs: must be >= 1");
  config.validate();

  EnsembleSummary summary;
  summary.window_from = options.window_from.value_or(0.5 * config.horizon);
  summary.window_to = options.window_to.value_or(config.horizon);
  if (!(summary.window_from <= summary.window_to)) {
    throw std::invalid_argument("window: from must not exceed to");
  }

  const std::size_t n = options.runs;
  summary.seeds.resize(n);
  for (std::size_t k = 0; k < n; ++k) summary.seeds[k] = derive_seed(config.seed, k);

  std::vector<SimTrajectory> trajectories(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) return;
      try {
        SimConfig run_config = config;
        run_config.seed = summary.seeds[k];
        trajectories[k] = run(run_config).trajectory;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const auto& grid = trajectories.front().times;
  const std::size_t points = grid.size();
  summary.times = grid;
  summary.mean.assign(points, 0.0);
  summary.stddev.assign(points, 0.0);
  summary.min.assign(points, 0.0);
  summary.max.assign(points, 0.0);

  std::vector<double> column(n);
  for (std::size_t i = 0; i < points; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      column[k] = static_cast<double>(trajectories[k].tips[i]);
      sum += column[k];
    }
    summary.mean[i] = sum / static_cast<double>(n);
    summary.stddev[i] = sample_std(column);
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    summary.min[i] = *lo;
    summary.max[i] = *hi;
  }

  summary.window_averages.reserve(n);
  for (const auto& traj : trajectories) {
    summary.window_averages.push_back(traj.time_average(summary.window_from, summary.window_to));
  }
  if (options.keep_trajectories) summary.runs = std::move(trajectories);
  return summary;
}

}  // namespace tangle
