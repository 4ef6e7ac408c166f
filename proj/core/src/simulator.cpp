#include "tangle/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tangle {

std::string_view to_string(ArrivalProcess p) {
  return p == ArrivalProcess::poisson ? "poisson" : "deterministic";
}

ArrivalProcess parse_arrival_process(std::string_view name) {
  if (name == "poisson") return ArrivalProcess::poisson;
  if (name == "deterministic") return ArrivalProcess::deterministic;
  throw std::invalid_argument("arrival: expected 'poisson' or 'deterministic', got '" +
                              std::string(name) + "'");
}

void SimConfig::validate() const {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument("lambda: must be finite and > 0");
  }
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw std::invalid_argument("horizon: must be finite and > 0");
  }
  if (!std::isfinite(sample_interval) || sample_interval <= 0.0) {
    throw std::invalid_argument("sample_interval: must be finite and > 0");
  }
}

double SimTrajectory::time_average(double from, double to) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= from && times[k] <= to) {
      sum += static_cast<double>(tips[k]);
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("averaging window contains no samples");
  return sum / static_cast<double>(count);
}

Simulator::Simulator(const SimConfig& config) : config_(config), rng_(config.seed) {
  config_.validate();
  sites_.push_back(Site{});
  tips_.insert(0);
  next_arrival_ = next_arrival_time();
}

double Simulator::next_arrival_time() {
  ++arrivals_;
  if (config_.arrival == ArrivalProcess::deterministic) {
    // Computed from the count so rounding does not accumulate.
    return static_cast<double>(arrivals_) / config_.lambda;
  }
  return next_arrival_ - std::log(rng_.uniform_open()) / config_.lambda;
}

void Simulator::arrive(double t) {
  const auto [a, b] = select_tips(tips_, rng_);
  Site site;
  site.id = sites_.size();
  site.issue_time = t;
  site.attach_time = t + config_.delay.sample(rng_);
  site.parents = {a, b};
  pending_.push(Attachment{site.attach_time, site.id});
  sites_.push_back(site);
}

void Simulator::attach(const Attachment& a) {
  Site& site = sites_[a.id];
  tips_.insert(site.id);
  for (const SiteId parent : site.parents) {
    if (tips_.erase(parent)) {
      sites_[parent].approved_time = a.time;
      ++approved_;
    }
  }
}

void Simulator::advance_to(double t) {
  while (true) {
    const bool have_attach = !pending_.empty() && pending_.top().time <= t;
    const bool have_arrival = next_arrival_ <= t;
    if (!have_attach && !have_arrival) break;
    if (have_attach && (!have_arrival || pending_.top().time <= next_arrival_)) {
      const Attachment a = pending_.top();
      pending_.pop();
      now_ = a.time;
      attach(a);
    } else {
      now_ = next_arrival_;
      arrive(next_arrival_);
      next_arrival_ = next_arrival_time();
    }
  }
  if (t > now_) now_ = t;
}

Tangle Simulator::snapshot() const {
  Tangle tangle;
  tangle.sites = sites_;
  tangle.tips.assign(tips_.ids().begin(), tips_.ids().end());
  tangle.now = now_;
  return tangle;
}

RunResult run(const SimConfig& config) {
  Simulator sim(config);
  RunResult result;
  auto& traj = result.trajectory;
  const auto samples =
      static_cast<std::size_t>(std::floor(config.horizon / config.sample_interval + 1e-9));
  traj.times.reserve(samples + 1);
  traj.tips.reserve(samples + 1);
  for (std::size_t k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) * config.sample_interval;
    sim.advance_to(t);
    traj.times.push_back(t);
    traj.tips.push_back(sim.tips().size());
  }
  sim.advance_to(config.horizon);
  traj.sites_issued = sim.issued();
  traj.final_tips = sim.tips().size();
  traj.final_approved = sim.approved();
  traj.final_pending = sim.pending();
  result.tangle = sim.snapshot();
  return result;
}

}  // namespace tangle
