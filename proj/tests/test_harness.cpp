#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "harness/commands.hpp"
#include "harness/experiment_config.hpp"
#include "tangle/errors.hpp"

namespace fs = std::filesystem;
using harness::ConfigError;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = harness::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tangle_harness_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::size_t columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

// Value printed after "<key>: " on its own line.
double printed_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key + ": ", 0) == 0) return std::stod(line.substr(key.size() + 2));
  }
  FAIL("no line for " << key << " in:\n" << text);
  return 0.0;
}

std::string config_path(const std::string& name) {
  return std::string(TANGLE_CONFIG_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  harness::ExperimentConfig config;
  config.sim.lambda = 12.5;
  config.sim.delay = tangle::DelayModel::uniform(0.5, 2.5);
  config.sim.arrival = tangle::ArrivalProcess::deterministic;
  config.sim.seed = 987654321;
  config.runs = 7;
  config.window_from = 10.0;
  config.out_dir = "elsewhere";
  config.grid_stride = 2.0;
  const auto back = harness::config_from_json(harness::config_to_json(config));
  CHECK(back == config);

  for (const auto& name : {"fixed_delay.json", "exponential_delay.json", "uniform_delay.json"}) {
    const auto loaded = harness::load_config(config_path(name));
    CHECK(harness::config_from_json(harness::config_to_json(loaded)) == loaded);
    CHECK(loaded.sim.seed == 2019);
    CHECK(loaded.runs == 150);
  }
}

TEST_CASE("delay parsing") {
  CHECK(harness::delay_from_json(json::parse(R"({"type":"fixed","h":5})")) ==
        tangle::DelayModel::fixed(5.0));
  CHECK(harness::delay_from_json(json::parse(R"({"type":"exponential","mu":0.2})")) ==
        tangle::DelayModel::exponential(0.2));
  CHECK(harness::delay_from_json(json::parse(R"({"type":"uniform","h0":1,"h1":11})")) ==
        tangle::DelayModel::uniform(1.0, 11.0));

  const auto message = [](const char* text) {
    try {
      harness::delay_from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"type":"fixed"})").find("h") != std::string::npos);
  CHECK(message(R"({"type":"exponential","mu":"fast"})").find("mu") != std::string::npos);
  CHECK(message(R"({"type":"gamma","k":2})").find("gamma") != std::string::npos);
  CHECK(message(R"({"type":"uniform","h0":1,"h1":11,"h2":3})").find("h2") != std::string::npos);
  CHECK(message(R"({"type":"uniform","h0":5,"h1":1})") != "no error");
  CHECK_THROWS_AS(harness::delay_from_json(json::parse(R"({"type":"fixed","h":0})")),
                  tangle::DegenerateDelay);
}

TEST_CASE("config file errors name the problem") {
  const auto dir = scratch("config_errors");
  {
    std::ofstream(dir / "syntax.json") << "{\n  \"lambda\": 20,\n  \"horizon\": ,\n}\n";
    std::ofstream(dir / "unknown.json") << R"({"lamda": 20})";
    std::ofstream(dir / "window.json") << R"({"horizon": 100, "window": {"from": 80, "to": 50}})";
  }
  try {
    harness::load_config(dir / "syntax.json");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("syntax.json") != std::string::npos);
    CHECK(what.find("line") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(harness::load_config(dir / "unknown.json"), doctest::Contains("lamda"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(harness::load_config(dir / "window.json"), doctest::Contains("window"),
                       ConfigError);
  CHECK_THROWS_AS(harness::load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("simulate writes well-formed, reproducible output") {
  const auto a = scratch("simulate_a");
  const auto b = scratch("simulate_b");
  const std::vector<std::string> common{"simulate", "--type", "uniform", "--h0", "1",
                                        "--h1",     "3",      "--lambda", "10", "--horizon",
                                        "40",       "--runs", "5",        "--seed", "11",
                                        "--write-runs"};
  auto args_a = common;
  args_a.insert(args_a.end(), {"--out", a.string()});
  auto args_b = common;
  args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "3"});
  const auto ra = cli(args_a);
  REQUIRE(ra.code == 0);
  REQUIRE(cli(args_b).code == 0);

  const auto ensemble = lines_of(a / "ensemble.csv");
  REQUIRE(ensemble.size() == 42);
  CHECK(ensemble.front() == "t,mean,std,min,max");
  for (const auto& line : ensemble) REQUIRE(columns(line) == 5);
  const auto run0 = lines_of(a / "run_0.csv");
  CHECK(run0.front() == "t,L");
  for (const auto& line : run0) REQUIRE(columns(line) == 2);
  CHECK(fs::exists(a / "run_4.csv"));

  CHECK(slurp(a / "ensemble.csv") == slurp(b / "ensemble.csv"));
  CHECK(slurp(a / "run_3.csv") == slurp(b / "run_3.csv"));

  const auto summary = json::parse(slurp(a / "summary.json"));
  CHECK(summary.at("seeds").size() == 5);
  CHECK(summary.at("per_run_time_avg_L").size() == 5);
  CHECK(summary.at("config").at("seed") == 11);
  CHECK(summary.at("stationary_window").at(0) == 20.0);
  CHECK(summary.at("time_avg_L").get<double>() > 1.0);
}

TEST_CASE("simulate rejects zero runs") {
  const auto r = cli({"simulate", "--runs", "0", "--out", scratch("zero_runs").string()});
  CHECK(r.code == harness::kExitConfig);
  CHECK(r.err.find("runs") != std::string::npos);
}

TEST_CASE("fluid pipeline") {
  const auto dir = scratch("fluid");
  auto r = cli({"fluid", "--type", "fixed", "--h", "5", "--horizon", "300", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(dir / "fluid.csv");
  REQUIRE(rows.front() == "t,l");
  CHECK(rows.size() == 30002);
  const double L_fixed = printed_value(r.out, "L = lambda l");
  CHECK(std::abs(L_fixed - 200.0) / 200.0 < 0.005);

  r = cli({"fluid", "--type", "uniform", "--h0", "1", "--h1", "11", "--horizon", "300", "--out",
           dir.string()});
  REQUIRE(r.code == 0);
  CHECK(std::abs(printed_value(r.out, "L = lambda l") - 213.8) / 213.8 < 0.005);

  r = cli({"fluid", "--type", "fixed", "--h", "0.5", "--step", "1", "--out", dir.string()});
  CHECK(r.code == harness::kExitConfig);
  CHECK(r.err.find("step size exceeds the mean delay") != std::string::npos);
}

TEST_CASE("stationary from flags") {
  auto r = cli({"stationary", "--type", "fixed", "--h", "5", "--lambda", "20"});
  REQUIRE(r.code == 0);
  CHECK(printed_value(r.out, "L") == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(printed_value(r.out, "l") == doctest::Approx(10.0).epsilon(1e-12));

  r = cli({"stationary", "--type", "exponential", "--mu", "0.2", "--lambda", "20"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(printed_value(r.out, "L") - 128.4) < 0.05);

  r = cli({"stationary", "--type", "fixed", "--h", "0"});
  CHECK(r.code != 0);
  CHECK(r.err.find("DegenerateDelay") != std::string::npos);

  r = cli({"stationary", "--type", "lognormal"});
  CHECK(r.code == harness::kExitConfig);
  r = cli({"stationary", "--no-such-flag"});
  CHECK(r.code == harness::kExitConfig);
}

TEST_CASE("compare on the three reference scenarios") {
  for (const auto& [name, target] : {std::pair{"fixed_delay.json", 200.0}, std::pair{"exponential_delay.json", 128.4},
                                     std::pair{"uniform_delay.json", 213.8}}) {
    const auto dir = scratch(std::string("compare_") + name);
    const auto r = cli({"compare", "--config", config_path(name), "--out", dir.string()});
    INFO(name << "\n" << r.out << r.err);
    REQUIRE(r.code == 0);
    const auto report = json::parse(slurp(dir / "report.json"));
    CHECK(report.at("partial") == false);
    const double mc = report.at("monte_carlo").at("stationary_mean").get<double>();
    CHECK(std::abs(mc - target) / target < 0.05);
    CHECK(report.at("relative_error").at("prediction_vs_mc").get<double>() < 0.05);
    CHECK(report.at("relative_error").at("fluid_vs_mc").get<double>() < 0.05);
    const auto rows = lines_of(dir / "compare.csv");
    CHECK(rows.front() == "t,mc_mean,fluid_L,predicted_L");
    CHECK(rows.size() == 302);
    for (const auto& file : {"ensemble.csv", "fluid.csv"}) CHECK(fs::exists(dir / file));
  }
}

TEST_CASE("seed falls back to the environment") {
  ::setenv("TANGLE_SEED", "4242", 1);
  CHECK(harness::resolve_config(std::nullopt, {}).sim.seed == 4242);
  CHECK(harness::config_from_json(json::parse(R"({"lambda": 3})")).sim.seed == 4242);
  harness::Overrides flags;
  flags.seed = 7;
  CHECK(harness::resolve_config(std::nullopt, flags).sim.seed == 7);
  CHECK(harness::load_config(config_path("fixed_delay.json")).sim.seed == 2019);
  ::setenv("TANGLE_SEED", "not-a-number", 1);
  CHECK_THROWS_AS(harness::resolve_config(std::nullopt, {}), ConfigError);
  ::unsetenv("TANGLE_SEED");
  CHECK(harness::resolve_config(std::nullopt, {}).sim.seed == 1);
}

TEST_CASE("unwritable output directory exits with the IO code") {
  const auto r = cli({"stationary", "--type", "fixed", "--h", "5"});
  REQUIRE(r.code == 0);
  const auto io = cli({"simulate", "--runs", "1", "--horizon", "5", "--out", "/dev/null/out"});
  CHECK(io.code == harness::kExitIo);
}

TEST_CASE("installed executable maps failures to exit codes") {
  const std::string exe = TANGLE_CLI;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("stationary --type fixed --h 5") == 0);
  CHECK(status("stationary --type fixed --h -1") == harness::kExitConfig);
  CHECK(status("simulate --runs 1 --horizon 5 --out /dev/null/out") == harness::kExitIo);
  CHECK(status("bogus") == harness::kExitConfig);
}

TEST_CASE("comparison report labels missing pipelines") {
  harness::ComparisonReport report;
  report.mc_mean = 120.0;
  report.fluid_status = "failed: step too large";
  const auto j = report.to_json();
  CHECK(j.at("partial") == true);
  CHECK(j.at("status").at("fluid") == "failed: step too large");
  CHECK(j.at("status").at("simulate") == "ok");
  CHECK(j.at("fluid").at("L_final").is_null());
  CHECK(j.at("monte_carlo").at("stationary_mean") == 120.0);
}
