#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "tangle/delay_model.hpp"
#include "tangle/random.hpp"
#include "tangle/tip_set.hpp"

namespace tangle {

/// One ledger vertex.
///
/// A site is a tip on [attach_time, approved_time). Genesis has id 0, is
/// attached at t = 0 and lists itself as both parents.
struct Site {
  SiteId id = 0;
  double issue_time = 0.0;
  double attach_time = 0.0;
  std::array<SiteId, 2> parents{0, 0};
  std::optional<double> approved_time;

  bool is_genesis() const { return id == 0; }
  bool is_tip_at(double t) const {
    return attach_time <= t && (!approved_time || *approved_time > t);
  }
};

enum class ArrivalProcess { poisson, deterministic };

std::string_view to_string(ArrivalProcess p);
/// Throws std::invalid_argument on an unknown name.
ArrivalProcess parse_arrival_process(std::string_view name);

struct SimConfig {
  double lambda = 20.0;
  DelayModel delay = DelayModel::fixed(5.0);
  double horizon = 300.0;
  ArrivalProcess arrival = ArrivalProcess::poisson;
  std::uint64_t seed = 1;
  double sample_interval = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Tip count L(t) sampled on the grid t_k = k * sample_interval.
struct SimTrajectory {
  std::vector<double> times;
  std::vector<std::size_t> tips;
  std::size_t sites_issued = 0;
  std::size_t final_tips = 0;
  std::size_t final_approved = 0;
  std::size_t final_pending = 0;

  /// Mean of the samples with from <= t <= to.
  double time_average(double from, double to) const;
};

/// Every site issued up to the horizon, pending ones included.
struct Tangle {
  std::vector<Site> sites;
  std::vector<SiteId> tips;
  double now = 0.0;
};

struct RunResult {
  SimTrajectory trajectory;
  Tangle tangle;
};

/// Event-driven Tangle growth.
///
/// At each arrival the new transaction picks two tips from the current tip
/// set and schedules its attachment after a sampled PoW delay. On attachment
/// it becomes a tip and its parents leave the tip set if they are still in
/// it. At equal times attachments are processed before arrivals.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config);

  /// Processes every event with time <= t.
  void advance_to(double t);

  double now() const { return now_; }
  const TipSet& tips() const { return tips_; }
  std::size_t issued() const { return sites_.size(); }
  std::size_t approved() const { return approved_; }
  std::size_t pending() const { return pending_.size(); }
  const std::vector<Site>& sites() const { return sites_; }

  Tangle snapshot() const;

 private:
  struct Attachment {
    double time;
    SiteId id;
    bool operator>(const Attachment& o) const {
      return time != o.time ? time > o.time : id > o.id;
    }
  };

  double next_arrival_time();
  void arrive(double t);
  void attach(const Attachment& a);

  SimConfig config_;
  RandomStream rng_;
  TipSet tips_;
  std::vector<Site> sites_;
  std::priority_queue<Attachment, std::vector<Attachment>, std::greater<>> pending_;
  std::size_t approved_ = 0;
  std::uint64_t arrivals_ = 0;
  double next_arrival_ = 0.0;
  double now_ = 0.0;
};

/// Runs one simulation to config.horizon. Identical configs give identical
/// results bit for bit.
RunResult run(const SimConfig& config);

}  // namespace tangle
