#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "numamig/ids.hpp"

namespace numamig {

/// Which core each live thread occupies. Each core holds at most
/// `capacity` threads; occupants are kept sorted by thread id.
class Placement {
 public:
  Placement() = default;
  Placement(int num_cores, int capacity);

  void place(ThreadId thread, CoreId core);
  void remove(ThreadId thread);
  /// Moves a placed thread; the destination must have room.
  void move(ThreadId thread, CoreId core);

  std::optional<CoreId> core_of(ThreadId thread) const;
  std::span<const ThreadId> occupants(CoreId core) const;
  bool has_room(CoreId core) const;

  int num_cores() const { return static_cast<int>(by_core_.size()); }
  int capacity() const { return capacity_; }
  std::size_t size() const { return where_.size(); }

  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  void check_core(CoreId core) const;

  int capacity_ = 1;
  std::vector<std::vector<ThreadId>> by_core_;
  std::map<ThreadId, CoreId> where_;
};

}  // namespace numamig
