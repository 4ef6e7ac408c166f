#pragma once

#include <string>
#include <string_view>

#include "tangle/simulator.hpp"

namespace tangle {

enum class Violation {
  none,
  bad_parent,     // parent id out of range
  cycle,          // directed cycle in the approval graph
  ordering,       // parent id or attach time not strictly before the child's
  unreachable,    // genesis not reachable by following approvals
  lifecycle,      // approved_time before attach_time, or approval without a child
  tip_count,      // recorded tips disagree with the site lifecycles
};

std::string_view to_string(Violation v);

/// Outcome of a structural check. Holds the first violation found.
struct ValidationReport {
  Violation violation = Violation::none;
  std::string message;

  bool ok() const { return violation == Violation::none; }
  explicit operator bool() const { return ok(); }
};

/// Checks acyclicity, genesis reachability, parent ordering, site lifecycles
/// and that tangle.tips equals the set of sites that are tips at tangle.now.
ValidationReport validate_dag(const Tangle& tangle);

/// As above, and also recounts L(t_k) from the site lifecycles at every
/// sample point of the trajectory.
ValidationReport validate_dag(const Tangle& tangle, const SimTrajectory& trajectory);

}  // namespace tangle
