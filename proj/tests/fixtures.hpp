#pragma once

// Shared test fixtures: the six-thread, three-node worked example and an
// independent brute-force ticket enumerator used as an oracle.

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

#include "numamig/metrics.hpp"
#include "numamig/placement.hpp"
#include "numamig/strategy.hpp"
#include "numamig/topology.hpp"

namespace fixtures {

using namespace numamig;

struct WorkedExample {
  Topology topo = Topology::uniform(3, 2, 2.0);
  Placement placement{6, 1};
  PerfRecord record;
  std::vector<ProcessThreads> processes;
};

/// Thread ids are the example's TIDs (100, 101, 200, ...). State after a
/// number of iterations: current-node values are inserted last.
inline WorkedExample worked_example() {
  WorkedExample ex;
  struct Row {
    int tid;
    int core;
    std::optional<double> p[3];
  };
  const Row rows[] = {
      {100, 2, {2.5, 1.9, 2.9}},
      {101, 4, {2.7, 1.8, 3.1}},
      {200, 0, {0.9, 1.4, std::nullopt}},
      {201, 5, {std::nullopt, 1.6, 2.1}},
      {300, 1, {3.3, std::nullopt, 6.3}},
      {301, 3, {std::nullopt, 8.1, 5.7}},
  };
  for (const auto& r : rows) {
    const ThreadId t{r.tid};
    const CoreId c{r.core};
    ex.placement.place(t, c);
    const int here = ex.topo.node_of(c).value;
    for (int k = 0; k < 3; ++k) {
      if (k != here && r.p[k]) ex.record.update(t, NodeId{k}, *r.p[k]);
    }
    ex.record.update(t, NodeId{here}, *r.p[here]);
  }
  ex.processes = {{ProcessId{100}, {ThreadId{100}, ThreadId{101}}},
                  {ProcessId{200}, {ThreadId{200}, ThreadId{201}}},
                  {ProcessId{300}, {ThreadId{300}, ThreadId{301}}}};
  return ex;
}

using Award = std::tuple<int, int, int>;  // core, swap tid (-1 = free slot), tickets

/// Brute force over every core of the machine and the fixed 3x4 rule table
/// (victim side: worse/unknown/better-or-equal; other side: worse/unknown/
/// better-or-equal/free slot). Zero awards are omitted; output is sorted.
inline std::vector<Award> oracle_tickets(const PerfRecord& record, ThreadId victim,
                                         const Placement& placement, const Topology& topo,
                                         const TicketParams& b) {
  const int victim_node = placement.core_of(victim)->value / topo.cores_per_node();
  const double victim_now = *record.get(victim, NodeId{victim_node});
  const int victim_side[3] = {b.b1, b.b2, b.b3};
  const int other_side[4] = {b.b4, b.b5, b.b6, b.b7};

  std::vector<Award> out;
  for (int core = 0; core < topo.num_cores(); ++core) {
    const int node = core / topo.cores_per_node();
    if (node == victim_node) continue;
    const auto past = record.get(victim, NodeId{node});
    const int row = !past ? 1 : (*past < victim_now ? 0 : 2);

    const auto occ = placement.occupants(CoreId{core});
    for (ThreadId other : occ) {
      const auto there = record.get(other, NodeId{victim_node});
      const auto mine = record.get(other, NodeId{node});
      const int col = (!there || !mine) ? 1 : (*there < *mine ? 0 : 2);
      const int t = victim_side[row] + other_side[col];
      if (t > 0) out.emplace_back(core, other.value, t);
    }
    if (static_cast<int>(occ.size()) < placement.capacity()) {
      const int t = victim_side[row] + other_side[3];
      if (t > 0) out.emplace_back(core, -1, t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Award> as_awards(const TicketTable& table) {
  std::vector<Award> out;
  for (const auto& e : table.entries) {
    out.emplace_back(e.core.value, e.swap ? e.swap->value : -1, e.tickets);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Random small machine state for property tests. Record values come from a
/// small set so ties are common.
struct RandomState {
  Topology topo = Topology::uniform(2, 1, 2.0);
  Placement placement{2, 1};
  PerfRecord record;
  TicketParams params;
  ThreadId victim;
};

inline RandomState random_state(Rng& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomState s;
  const int nodes = uni(2, 4);
  const int cores_per_node = uni(1, 3);
  const int capacity = uni(1, 2);
  s.topo = Topology::uniform(nodes, cores_per_node, 3.0);
  s.placement = Placement(s.topo.num_cores(), capacity);

  const int slots = s.topo.num_cores() * capacity;
  const int threads = uni(1, slots);
  for (int t = 0; t < threads; ++t) {
    CoreId core;
    do {
      core = CoreId{uni(0, s.topo.num_cores() - 1)};
    } while (!s.placement.has_room(core));
    s.placement.place(ThreadId{t}, core);
    for (int k = 0; k < nodes; ++k) {
      if (uni(0, 1) == 1) s.record.update(ThreadId{t}, NodeId{k}, static_cast<double>(uni(1, 3)));
    }
  }
  s.victim = ThreadId{uni(0, threads - 1)};
  const NodeId victim_node = s.topo.node_of(*s.placement.core_of(s.victim));
  if (!s.record.get(s.victim, victim_node)) {
    s.record.update(s.victim, victim_node, static_cast<double>(uni(1, 3)));
  }
  do {
    s.params = {uni(0, 5), uni(0, 5), uni(0, 5), uni(0, 5), uni(0, 5), uni(0, 5), uni(0, 5)};
  } while (s.params.b1 + s.params.b2 + s.params.b3 + s.params.b4 + s.params.b5 + s.params.b6 +
               s.params.b7 ==
           0);
  return s;
}

}  // namespace fixtures
