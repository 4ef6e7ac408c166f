#include "harness/experiment_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "tangle/errors.hpp"

namespace harness {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(where + key + ": unknown field");
    }
  }
}

double number_field(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + key + ": missing");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + key + ": must be finite");
  return x;
}

template <class T>
void read_optional(const json& j, const std::string& key, T& target) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key + ": wrong type");
  }
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* raw = std::getenv("TANGLE_SEED");
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (*end != '\0') throw ConfigError("TANGLE_SEED: not an unsigned integer: " + std::string(raw));
  return value;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (runs == 0) throw ConfigError("runs: must be >= 1");
  if (!std::isfinite(fluid_step) || fluid_step <= 0.0) {
    throw ConfigError("fluid_step: must be finite and > 0");
  }
  if (fluid_step > sim.delay.mean()) {
    throw ConfigError("fluid_step: step size exceeds the mean delay " +
                      std::to_string(sim.delay.mean()));
  }
  if (!std::isfinite(lambda_ref) || lambda_ref <= 0.0) {
    throw ConfigError("lambda_ref: must be finite and > 0");
  }
  if (!std::isfinite(stationary_tol) || stationary_tol <= 0.0) {
    throw ConfigError("stationary_tol: must be finite and > 0");
  }
  if (!(grid_stride >= 0.0) || !std::isfinite(grid_stride)) {
    throw ConfigError("grid_stride: must be finite and >= 0");
  }
  const double from = effective_window_from();
  const double to = effective_window_to();
  if (!(from >= 0.0 && from <= to && to <= sim.horizon)) {
    throw ConfigError("window: need 0 <= from <= to <= horizon");
  }
  if (out_dir.empty()) throw ConfigError("out: must not be empty");
}

tangle::DelayModel delay_from_json(const json& j) {
  const std::string where = "delay.";
  if (!j.is_object()) throw ConfigError("delay: expected an object");
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError("delay.type: missing or not a string");
  }
  const auto type = j.at("type").get<std::string>();
  try {
    if (type == "fixed") {
      reject_unknown_keys(j, {"type", "h"}, where);
      return tangle::DelayModel::fixed(number_field(j, "h", where));
    }
    if (type == "exponential") {
      reject_unknown_keys(j, {"type", "mu"}, where);
      return tangle::DelayModel::exponential(number_field(j, "mu", where));
    }
    if (type == "uniform") {
      reject_unknown_keys(j, {"type", "h0", "h1"}, where);
      return tangle::DelayModel::uniform(number_field(j, "h0", where),
                                         number_field(j, "h1", where));
    }
  } catch (const tangle::DegenerateDelay&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("delay: ") + e.what());
  }
  throw ConfigError("delay.type: expected fixed, exponential or uniform, got '" + type + "'");
}

json delay_to_json(const tangle::DelayModel& delay) {
  if (const auto* d = delay.as_fixed()) return {{"type", "fixed"}, {"h", d->h}};
  if (const auto* d = delay.as_exponential()) return {{"type", "exponential"}, {"mu", d->mu}};
  if (const auto* d = delay.as_uniform()) {
    return {{"type", "uniform"}, {"h0", d->h0}, {"h1", d->h1}};
  }
  throw ConfigError("delay: custom laws have no config representation");
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown_keys(j,
                      {"lambda", "horizon", "arrival", "seed", "sample_interval", "delay", "runs",
                       "fluid_step", "lambda_ref", "stationary_tol", "window", "out",
                       "write_runs", "grid_stride", "threads"},
                      "");
  ExperimentConfig config;
  read_optional(j, "lambda", config.sim.lambda);
  read_optional(j, "horizon", config.sim.horizon);
  read_optional(j, "sample_interval", config.sim.sample_interval);
  if (j.contains("arrival")) {
    std::string arrival;
    read_optional(j, "arrival", arrival);
    try {
      config.sim.arrival = tangle::parse_arrival_process(arrival);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected an unsigned integer");
    config.sim.seed = j.at("seed").get<std::uint64_t>();
  } else {
    config.sim.seed = seed_from_env(1);
  }
  if (j.contains("delay")) config.sim.delay = delay_from_json(j.at("delay"));
  if (j.contains("runs") && !j.at("runs").is_null()) {
    if (!j.at("runs").is_number_integer() || j.at("runs").get<long long>() < 0) {
      throw ConfigError("runs: expected a non-negative integer");
    }
    config.runs = j.at("runs").get<std::size_t>();
  }
  read_optional(j, "fluid_step", config.fluid_step);
  read_optional(j, "lambda_ref", config.lambda_ref);
  read_optional(j, "stationary_tol", config.stationary_tol);
  if (j.contains("window") && !j.at("window").is_null()) {
    const auto& w = j.at("window");
    if (!w.is_object()) throw ConfigError("window: expected an object with from/to");
    reject_unknown_keys(w, {"from", "to"}, "window.");
    if (w.contains("from") && !w.at("from").is_null()) {
      config.window_from = number_field(w, "from", "window.");
    }
    if (w.contains("to") && !w.at("to").is_null()) {
      config.window_to = number_field(w, "to", "window.");
    }
  }
  read_optional(j, "out", config.out_dir);
  read_optional(j, "write_runs", config.write_runs);
  read_optional(j, "grid_stride", config.grid_stride);
  read_optional(j, "threads", config.threads);
  config.validate();
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json window = json::object();
  window["from"] = config.window_from ? json(*config.window_from) : json(nullptr);
  window["to"] = config.window_to ? json(*config.window_to) : json(nullptr);
  return {
      {"lambda", config.sim.lambda},
      {"horizon", config.sim.horizon},
      {"arrival", std::string(tangle::to_string(config.sim.arrival))},
      {"seed", config.sim.seed},
      {"sample_interval", config.sim.sample_interval},
      {"delay", delay_to_json(config.sim.delay)},
      {"runs", config.runs},
      {"fluid_step", config.fluid_step},
      {"lambda_ref", config.lambda_ref},
      {"stationary_tol", config.stationary_tol},
      {"window", window},
      {"out", config.out_dir},
      {"write_runs", config.write_runs},
      {"grid_stride", config.grid_stride},
      {"threads", config.threads},
  };
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig resolve_config(const std::optional<std::filesystem::path>& path,
                                const Overrides& o) {
  ExperimentConfig config;
  if (path) {
    config = load_config(*path);
  } else {
    config.sim.seed = seed_from_env(1);
  }

  if (o.seed) config.sim.seed = *o.seed;
  if (o.runs) config.runs = *o.runs;
  if (o.lambda) config.sim.lambda = *o.lambda;
  if (o.horizon) config.sim.horizon = *o.horizon;
  if (o.out_dir) config.out_dir = *o.out_dir;
  if (o.step) config.fluid_step = *o.step;
  if (o.tol) config.stationary_tol = *o.tol;
  if (o.threads) config.threads = *o.threads;
  if (o.write_runs) config.write_runs = true;
  if (o.arrival) {
    try {
      config.sim.arrival = tangle::parse_arrival_process(*o.arrival);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (o.delay_type || o.h || o.mu || o.h0 || o.h1) {
    json d = o.delay_type ? json{{"type", *o.delay_type}} : delay_to_json(config.sim.delay);
    if (o.h) d["h"] = *o.h;
    if (o.mu) d["mu"] = *o.mu;
    if (o.h0) d["h0"] = *o.h0;
    if (o.h1) d["h1"] = *o.h1;
    config.sim.delay = delay_from_json(d);
  }
  config.validate();
  return config;
}

}  // namespace harness
