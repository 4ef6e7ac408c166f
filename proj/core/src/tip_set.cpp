#include "tangle/tip_set.hpp"

#include <stdexcept>

namespace tangle {

bool TipSet::insert(SiteId id) {
  if (contains(id)) return false;
  if (id >= slot_.size()) slot_.resize(id + 1, npos);
  slot_[id] = members_.size();
  members_.push_back(id);
  return true;
}

bool TipSet::erase(SiteId id) {
  if (!contains(id)) return false;
  const std::size_t hole = slot_[id];
  const SiteId last = members_.back();
  members_[hole] = last;
  slot_[last] = hole;
  members_.pop_back();
  slot_[id] = npos;
  return true;
}

SiteId TipSet::sample(RandomStream& rng) const {
  if (members_.empty()) {
    throw std::logic_error("tip selection from an empty tip set");
  }
  return members_[rng.index(members_.size())];
}

std::pair<SiteId, SiteId> select_tips(const TipSet& tips, RandomStream& rng) {
  const SiteId first = tips.sample(rng);
  const SiteId second = tips.sample(rng);
  return {first, second};
}

}  // namespace tangle
