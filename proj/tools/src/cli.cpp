#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "harness/commands.hpp"
#include "tangle/errors.hpp"

namespace harness {
namespace {

struct CliState {
  std::optional<std::string> config_path;
  Overrides overrides;
};

void add_common_flags(CLI::App& cmd, CliState& s) {
  auto& o = s.overrides;
  // -h is taken by the fixed-delay flag --h.
  cmd.set_help_flag("--help", "Print this help message and exit");
  cmd.add_option("--config", s.config_path, "Experiment config (JSON)");
  cmd.add_option("--seed", o.seed, "Base seed (falls back to TANGLE_SEED)");
  cmd.add_option("--runs", o.runs, "Number of Monte Carlo runs");
  cmd.add_option("--lambda", o.lambda, "Arrival rate");
  cmd.add_option("--horizon", o.horizon, "Simulation end time");
  cmd.add_option("--out", o.out_dir, "Output directory");
  cmd.add_option("--arrival", o.arrival, "Arrival process: poisson or deterministic");
  cmd.add_option("--step", o.step, "Fluid solver step");
  cmd.add_option("--tol", o.tol, "Stationary solver tolerance");
  cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd.add_flag("--write-runs", o.write_runs, "Also write run_<k>.csv per run");
  cmd.add_option("--type", o.delay_type, "Delay law: fixed, exponential or uniform");
  cmd.add_option("--h", o.h, "Fixed delay");
  cmd.add_option("--mu", o.mu, "Exponential delay rate");
  cmd.add_option("--h0", o.h0, "Uniform delay lower bound");
  cmd.add_option("--h1", o.h1, "Uniform delay upper bound");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangle growth: Monte Carlo, fluid limit and stationary tip counts", "tangle"};
  app.require_subcommand(1);
  app.set_help_flag("-h,--help", "Print this help message and exit");

  CliState state;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo ensemble");
  auto* fluid = app.add_subcommand("fluid", "Integrate the fluid-limit PDE");
  auto* stationary = app.add_subcommand("stationary", "Solve for the stationary tip count");
  auto* compare = app.add_subcommand("compare", "Compare all three on one configuration");
  for (auto* cmd : {simulate, fluid, stationary, compare}) add_common_flags(*cmd, state);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::optional<std::filesystem::path> path;
    if (state.config_path) path = *state.config_path;
    const ExperimentConfig config = resolve_config(path, state.overrides);

    if (simulate->parsed()) {
      cmd_simulate(config, out);
    } else if (fluid->parsed()) {
      cmd_fluid(config, out);
    } else if (stationary->parsed()) {
      cmd_stationary(config, out);
    } else if (compare->parsed()) {
      cmd_compare(config, out);
    }
    return kExitOk;
  } catch (const tangle::DegenerateDelay& e) {
    err << "DegenerateDelay: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace harness
