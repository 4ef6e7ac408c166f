#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tangle/random.hpp"

namespace tangle {

using SiteId = std::uint64_t;

/// Set of tip ids with O(1) insert, erase and uniform sampling.
///
/// Dense array of members plus a slot table indexed by id; erase swaps the
/// last member into the hole.
class TipSet {
 public:
  bool insert(SiteId id);
  /// Returns false if id was not a member.
  bool erase(SiteId id);
  bool contains(SiteId id) const {
    return id < slot_.size() && slot_[id] != npos;
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const SiteId> ids() const { return members_; }

  /// Uniform member. The set must be non-empty.
  SiteId sample(RandomStream& rng) const;

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<SiteId> members_;
  std::vector<std::size_t> slot_;
};

/// Two independent uniform picks with replacement. A tip is in the pair with
/// probability 2/L - 1/L^2; both picks may be the same tip.
std::pair<SiteId, SiteId> select_tips(const TipSet& tips, RandomStream& rng);

}  // namespace tangle
