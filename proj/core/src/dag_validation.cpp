#include "tangle/dag_validation.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <vector>

namespace tangle {
namespace {

ValidationReport fail(Violation v, const std::string& message) { return {v, message}; }

std::string site_label(SiteId id) { return "site " + std::to_string(id); }

}  // namespace

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::none: return "none";
    case Violation::bad_parent: return "bad_parent";
    case Violation::cycle: return "cycle";
    case Violation::ordering: return "ordering";
    case Violation::unreachable: return "unreachable";
    case Violation::lifecycle: return "lifecycle";
    case Violation::tip_count: return "tip_count";
  }
  return "unknown";
}

ValidationReport validate_dag(const Tangle& tangle) {
  const auto& sites = tangle.sites;
  const std::size_t n = sites.size();
  if (n == 0) return fail(Violation::unreachable, "tangle has no genesis");

  for (std::size_t i = 0; i < n; ++i) {
    if (sites[i].id != i) {
      return fail(Violation::bad_parent, site_label(i) + " stored with id " +
                                             std::to_string(sites[i].id));
    }
    if (i == 0) continue;
    for (SiteId p : sites[i].parents) {
      if (p >= n) {
        return fail(Violation::bad_parent,
                    site_label(i) + " references missing parent " + std::to_string(p));
      }
    }
  }

  // Kahn's algorithm on the approval graph: a site is ready once all of its
  // distinct parents are. Anything left over sits on or behind a cycle.
  std::vector<std::vector<SiteId>> children(n);
  std::vector<int> unresolved(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const auto [a, b] = sites[i].parents;
    children[a].push_back(i);
    unresolved[i] = 1;
    if (b != a) {
      children[b].push_back(i);
      unresolved[i] = 2;
    }
  }
  std::deque<SiteId> ready{0};
  std::vector<bool> reached(n, false);
  reached[0] = true;
  std::size_t resolved = 0;
  while (!ready.empty()) {
    const SiteId s = ready.front();
    ready.pop_front();
    ++resolved;
    for (SiteId c : children[s]) {
      if (--unresolved[c] == 0) {
        reached[c] = true;
        ready.push_back(c);
      }
    }
  }
  if (resolved != n) {
    const auto it = std::find(reached.begin(), reached.end(), false);
    return fail(Violation::cycle, site_label(static_cast<SiteId>(it - reached.begin())) +
                                      " lies on or depends on a directed cycle");
  }
  // Every site resolved means every site approves genesis transitively.
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    return fail(Violation::unreachable, "genesis not reachable from every site");
  }

  for (std::size_t i = 1; i < n; ++i) {
    const Site& s = sites[i];
    if (!(s.issue_time < s.attach_time)) {
      return fail(Violation::ordering, site_label(i) + " attaches before it is issued");
    }
    for (SiteId p : s.parents) {
      if (p >= i) {
        return fail(Violation::ordering,
                    site_label(i) + " approves later site " + std::to_string(p));
      }
      if (!(sites[p].attach_time < s.attach_time)) {
        return fail(Violation::ordering,
                    site_label(i) + " attaches no later than its parent " + std::to_string(p));
      }
      if (sites[p].attach_time > s.issue_time) {
        return fail(Violation::ordering,
                    site_label(i) + " selected parent " + std::to_string(p) +
                        " before that parent attached");
      }
    }
  }

  // A site leaves the tip set exactly when its first child attaches.
  constexpr double never = std::numeric_limits<double>::infinity();
  std::vector<double> first_child(n, never);
  for (std::size_t i = 1; i < n; ++i) {
    if (sites[i].attach_time > tangle.now) continue;
    for (SiteId p : sites[i].parents) {
      first_child[p] = std::min(first_child[p], sites[i].attach_time);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Site& s = sites[i];
    if (s.approved_time) {
      if (*s.approved_time < s.attach_time) {
        return fail(Violation::lifecycle, site_label(i) + " approved before it attached");
      }
      if (*s.approved_time != first_child[i]) {
        std::ostringstream msg;
        msg << site_label(i) << " approved at " << *s.approved_time
            << " but its first child attached at " << first_child[i];
        return fail(Violation::lifecycle, msg.str());
      }
    } else if (first_child[i] != never) {
      return fail(Violation::lifecycle, site_label(i) + " has an attached child but is not approved");
    }
  }

  std::vector<SiteId> expected;
  for (const Site& s : sites) {
    if (s.is_tip_at(tangle.now)) expected.push_back(s.id);
  }
  std::vector<SiteId> recorded = tangle.tips;
  std::sort(recorded.begin(), recorded.end());
  if (recorded != expected) {
    return fail(Violation::tip_count, "tip set holds " + std::to_string(recorded.size()) +
                                          " ids, lifecycles give " +
                                          std::to_string(expected.size()));
  }
  return {};
}

ValidationReport validate_dag(const Tangle& tangle, const SimTrajectory& trajectory) {
  ValidationReport report = validate_dag(tangle);
  if (!report) return report;
  if (trajectory.times.size() != trajectory.tips.size()) {
    return fail(Violation::tip_count, "trajectory columns differ in length");
  }
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const double t = trajectory.times[k];
    const auto recount = static_cast<std::size_t>(
        std::count_if(tangle.sites.begin(), tangle.sites.end(),
                      [t](const Site& s) { return s.is_tip_at(t); }));
    if (recount != trajectory.tips[k]) {
      std::ostringstream msg;
      msg << "L(" << t << ") recorded " << trajectory.tips[k] << ", recount gives " << recount;
      return fail(Violation::tip_count, msg.str());
    }
  }
  return report;
}

}  // namespace tangle
