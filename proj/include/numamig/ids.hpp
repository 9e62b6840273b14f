#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace numamig {

/// Dense integer identifier tagged by the domain concept it names.
template <typename Tag>
struct Id {
  int value = 0;

  constexpr Id() = default;
  constexpr explicit Id(int v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

struct CoreTag {};
struct NodeTag {};
struct ThreadTag {};
struct ProcessTag {};

using CoreId = Id<CoreTag>;
using NodeId = Id<NodeTag>;   // memory cell k is co-located with node k
using ThreadId = Id<ThreadTag>;
using ProcessId = Id<ProcessTag>;

/// The single seeded generator threaded through sampling and decisions.
using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace numamig

template <typename Tag>
struct std::hash<numamig::Id<Tag>> {
  std::size_t operator()(numamig::Id<Tag> id) const noexcept {
    return std::hash<int>{}(id.value);
  }
};
