#include "harness/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "harness/output.hpp"
#include "tangle/errors.hpp"

namespace harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

tangle::EnsembleOptions ensemble_options(const ExperimentConfig& config) {
  tangle::EnsembleOptions options;
  options.runs = config.runs;
  options.threads = config.threads;
  options.keep_trajectories = config.write_runs;
  options.window_from = config.effective_window_from();
  options.window_to = config.effective_window_to();
  return options;
}

tangle::FluidOptions fluid_options(const ExperimentConfig& config) {
  tangle::FluidOptions options;
  options.step = config.fluid_step;
  options.lambda_ref = config.lambda_ref;
  options.snapshot_stride = config.grid_stride;
  return options;
}

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / reference;
}

}  // namespace

tangle::EnsembleSummary cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = config.out_dir;
  ensure_directory(dir);

  auto summary = tangle::run_ensemble(config.sim, ensemble_options(config));
  write_ensemble_csv(dir / "ensemble.csv", summary);
  if (config.write_runs) {
    for (std::size_t k = 0; k < summary.runs.size(); ++k) {
      write_trajectory_csv(dir / ("run_" + std::to_string(k) + ".csv"), summary.runs[k]);
    }
  }

  json j;
  j["config"] = config_to_json(config);
  j["seeds"] = summary.seeds;
  j["stationary_window"] = {summary.window_from, summary.window_to};
  j["time_avg_L"] = summary.stationary_mean();
  j["time_avg_L_std"] = summary.stationary_std();
  j["per_run_time_avg_L"] = summary.window_averages;
  j["final_mean_L"] = summary.mean.back();
  write_json(dir / "summary.json", j);

  log << "runs: " << config.runs << "\n"
      << "delay: " << config.sim.delay.describe() << "\n"
      << "window: [" << summary.window_from << ", " << summary.window_to << "]\n"
      << "time_avg_L: " << format_number(summary.stationary_mean()) << " (std "
      << format_number(summary.stationary_std()) << ")\n"
      << "final_mean_L: " << format_number(summary.mean.back()) << "\n";
  return summary;
}

tangle::FluidGrid cmd_fluid(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = config.out_dir;
  ensure_directory(dir);

  auto grid = tangle::solve_pde(config.sim.delay, config.sim.horizon, fluid_options(config));
  for (const auto& w : grid.warnings) log << "warning: " << w << "\n";
  write_fluid_csv(dir / "fluid.csv", grid);
  if (config.grid_stride > 0.0) write_fluid_grid_csv(dir / "fluid_grid.csv", grid);

  const double l_end = grid.l.back();
  log << "delay: " << config.sim.delay.describe() << "\n"
      << "step: " << format_number(grid.step) << "\n"
      << "l(" << format_number(grid.horizon()) << "): " << format_number(l_end) << "\n"
      << "L = lambda l: " << format_number(config.sim.lambda * l_end) << "\n";
  return grid;
}

tangle::StationaryResult cmd_stationary(const ExperimentConfig& config, std::ostream& log) {
  const auto result = tangle::solve_stationary(config.sim.delay, config.stationary_tol);
  log << "delay: " << config.sim.delay.describe() << "\n"
      << "l: " << format_number(result.l) << "\n"
      << "L: " << format_number(config.sim.lambda * result.l) << "\n"
      << "residual: " << format_number(result.residual) << "\n"
      << "iterations: " << result.iterations << "\n";
  return result;
}

json ComparisonReport::to_json() const {
  return {
      {"config", config},
      {"seeds", seeds},
      {"stationary_window", {window_from, window_to}},
      {"predicted",
       {{"l", optional_number(predicted_l)},
        {"L", optional_number(predicted_L)},
        {"residual", optional_number(stationary_residual)}}},
      {"fluid", {{"L_final", optional_number(fluid_L)}}},
      {"monte_carlo", {{"stationary_mean", optional_number(mc_mean)},
                       {"stationary_std", optional_number(mc_std)}}},
      {"relative_error",
       {{"prediction_vs_mc", optional_number(prediction_vs_mc)},
        {"fluid_vs_mc", optional_number(fluid_vs_mc)}}},
      {"status",
       {{"simulate", simulate_status}, {"fluid", fluid_status}, {"stationary", stationary_status}}},
      {"partial", !complete()},
  };
}

ComparisonReport cmd_compare(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const fs::path dir = config.out_dir;
  ensure_directory(dir);

  ComparisonReport report;
  report.config = config_to_json(config);
  report.window_from = config.effective_window_from();
  report.window_to = config.effective_window_to();

  std::optional<tangle::EnsembleSummary> ensemble;
  try {
    ensemble = tangle::run_ensemble(config.sim, ensemble_options(config));
    write_ensemble_csv(dir / "ensemble.csv", *ensemble);
    report.seeds = ensemble->seeds;
    report.mc_mean = ensemble->stationary_mean();
    report.mc_std = ensemble->stationary_std();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    report.simulate_status = std::string("failed: ") + e.what();
  }

  std::optional<tangle::FluidGrid> fluid;
  try {
    fluid = tangle::solve_pde(config.sim.delay, config.sim.horizon, fluid_options(config));
    write_fluid_csv(dir / "fluid.csv", *fluid);
    report.fluid_L = config.sim.lambda * fluid->l.back();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    report.fluid_status = std::string("failed: ") + e.what();
  }

  try {
    const auto stationary = tangle::solve_stationary(config.sim.delay, config.stationary_tol);
    report.predicted_l = stationary.l;
    report.predicted_L = config.sim.lambda * stationary.l;
    report.stationary_residual = stationary.residual;
  } catch (const std::exception& e) {
    report.stationary_status = std::string("failed: ") + e.what();
  }

  if (report.mc_mean && report.predicted_L) {
    report.prediction_vs_mc = relative_error(*report.predicted_L, *report.mc_mean);
  }
  if (report.mc_mean && report.fluid_L) {
    report.fluid_vs_mc = relative_error(*report.fluid_L, *report.mc_mean);
  }

  if (ensemble) {
    const fs::path path = dir / "compare.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "t,mc_mean,fluid_L,predicted_L\n";
    for (std::size_t k = 0; k < ensemble->times.size(); ++k) {
      const double t = ensemble->times[k];
      out << format_number(t) << ',' << format_number(ensemble->mean[k]) << ','
          << (fluid ? format_number(config.sim.lambda * fluid->l_at(t)) : "nan") << ','
          << (report.predicted_L ? format_number(*report.predicted_L) : "nan") << '\n';
    }
    if (!out.flush()) throw IoError("write failed for " + path.string());
  }
  write_json(dir / "report.json", report.to_json());

  log << "delay: " << config.sim.delay.describe() << ", lambda " << config.sim.lambda << "\n";
  if (report.predicted_L) log << "predicted L: " << format_number(*report.predicted_L) << "\n";
  if (report.fluid_L) log << "fluid L(horizon): " << format_number(*report.fluid_L) << "\n";
  if (report.mc_mean) {
    log << "MC stationary mean: " << format_number(*report.mc_mean) << " (std "
        << format_number(*report.mc_std) << ", " << config.runs << " runs)\n";
  }
  if (report.prediction_vs_mc) {
    log << "relative error prediction vs MC: " << format_number(*report.prediction_vs_mc) << "\n";
  }
  if (report.fluid_vs_mc) {
    log << "relative error fluid vs MC: " << format_number(*report.fluid_vs_mc) << "\n";
  }
  if (!report.complete()) {
    throw PipelineFailure("compare: simulate " + report.simulate_status + "; fluid " +
                          report.fluid_status + "; stationary " + report.stationary_status);
  }
  return report;
}

}  // namespace harness
