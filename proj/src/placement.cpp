#include "numamig/placement.hpp"

#include <algorithm>
#include <string>

namespace numamig {

Placement::Placement(int num_cores, int capacity) : capacity_(capacity), by_core_(num_cores) {
  if (num_cores < 1) throw Error("placement: need at least one core");
  if (capacity < 1) throw Error("placement: core capacity must be >= 1");
}

void Placement::check_core(CoreId core) const {
  if (core.value < 0 || core.value >= num_cores()) {
    throw Error("placement: core " + std::to_string(core.value) + " out of range");
  }
}

void Placement::place(ThreadId thread, CoreId core) {
  check_core(core);
  if (where_.contains(thread)) {
    throw Error("placement: thread " + std::to_string(thread.value) + " already placed");
  }
  if (!has_room(core)) {
    throw Error("placement: core " + std::to_string(core.value) + " is full");
  }
  auto& occ = by_core_[core.value];
  occ.insert(std::lower_bound(occ.begin(), occ.end(), thread), thread);
  where_.emplace(thread, core);
}

void Placement::remove(ThreadId thread) {
  auto it = where_.find(thread);
  if (it == where_.end()) {
    throw Error("placement: thread " + std::to_string(thread.value) + " is not placed");
  }
  auto& occ = by_core_[it->second.value];
  occ.erase(std::find(occ.begin(), occ.end(), thread));
  where_.erase(it);
}

void Placement::move(ThreadId thread, CoreId core) {
  check_core(core);
  auto from = core_of(thread);
  if (!from) {
    throw Error("placement: thread " + std::to_string(thread.value) + " is not placed");
  }
  if (*from == core) return;
  if (!has_room(core)) {
    throw Error("placement: core " + std::to_string(core.value) + " is full");
  }
  remove(thread);
  place(thread, core);
}

std::optional<CoreId> Placement::core_of(ThreadId thread) const {
  auto it = where_.find(thread);
  if (it == where_.end()) return std::nullopt;
  return it->second;
}

std::span<const ThreadId> Placement::occupants(CoreId core) const {
  check_core(core);
  return by_core_[core.value];
}

bool Placement::has_room(CoreId core) const {
  check_core(core);
  return static_cast<int>(by_core_[core.value].size()) < capacity_;
}

}  // namespace numamig
