#include "numamig/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace numamig {

void TicketParams::validate() const {
  const int all[] = {b1, b2, b3, b4, b5, b6, b7};
  bool any = false;
  for (int b : all) {
    if (b < 0) throw Error("tickets: B values must be >= 0");
    any = any || b > 0;
  }
  if (!any) throw Error("tickets: at least one B value must be > 0");
}

MigrationDecision inverse(const MigrationDecision& d) {
  return MigrationDecision{d.victim, d.destination, d.from, d.swap};
}

ThreadId select_victim(std::span<const ThreadScore> scores, Rng& rng) {
  if (scores.empty()) throw Error("select_victim: no candidate threads");
  double lowest = scores.front().value;
  for (const auto& s : scores) lowest = std::min(lowest, s.value);
  const double cutoff = lowest + kScoreTieTolerance * std::abs(lowest);

  std::vector<ThreadId> tied;
  for (const auto& s : scores) {
    if (s.value <= cutoff) tied.push_back(s.thread);
  }
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

namespace {

// Compares an optional past observation against a reference value.
enum class History { kWorse, kUnknown, kNotWorse };

History classify(std::optional<double> past, std::optional<double> reference) {
  if (!past || !reference) return History::kUnknown;
  return *past < *reference ? History::kWorse : History::kNotWorse;
}

int award(History h, int worse, int unknown, int not_worse) {
  switch (h) {
    case History::kWorse: return worse;
    case History::kUnknown: return unknown;
    case History::kNotWorse: return not_worse;
  }
  return 0;
}

}  // namespace

TicketTable distribute_tickets(const PerfRecord& record, ThreadId victim,
                               const Placement& placement, const Topology& topo,
                               const TicketParams& params) {
  const auto victim_core = placement.core_of(victim);
  if (!victim_core) {
    throw Error("distribute_tickets: victim " + std::to_string(victim.value) + " is not placed");
  }
  const NodeId here = topo.node_of(*victim_core);
  const auto victim_here = record.get(victim, here);
  if (!victim_here) throw Error("distribute_tickets: victim has no P on its current node");
  if (topo.num_nodes() < 2) throw NoDestinationError("distribute_tickets: single-node topology");

  TicketTable table;
  auto add = [&](CoreId core, std::optional<ThreadId> swap, int tickets) {
    if (tickets <= 0) return;
    table.entries.push_back({core, swap, tickets});
    table.total += tickets;
  };

  for (int k = 0; k < topo.num_nodes(); ++k) {
    const NodeId node{k};
    if (node == here) continue;
    const int node_side =
        award(classify(record.get(victim, node), victim_here), params.b1, params.b2, params.b3);
    for (CoreId core : topo.cores_of(node)) {
      for (ThreadId other : placement.occupants(core)) {
        const int other_side = award(classify(record.get(other, here), record.get(other, node)),
                                     params.b4, params.b5, params.b6);
        add(core, other, node_side + other_side);
      }
      if (placement.has_room(core)) add(core, std::nullopt, node_side + params.b7);
    }
  }
  return table;
}

const TicketEntry& draw_ticket(const TicketTable& table, int ticket) {
  if (table.total <= 0) throw NoFeasibleMigration("lottery: no tickets awarded");
  if (ticket < 0 || ticket >= table.total) throw Error("lottery: ticket out of range");
  for (const auto& e : table.entries) {
    if (ticket < e.tickets) return e;
    ticket -= e.tickets;
  }
  throw Error("lottery: ticket table total is inconsistent");
}

const TicketEntry& lottery(const TicketTable& table, Rng& rng) {
  if (table.total <= 0) throw NoFeasibleMigration("lottery: no tickets awarded");
  std::uniform_int_distribution<int> pick(0, table.total - 1);
  return draw_ticket(table, pick(rng));
}

void apply_interchange(Placement& placement, const MigrationDecision& d) {
  if (placement.core_of(d.victim) != d.from) {
    throw StaleDecision("apply_interchange: victim moved or finished");
  }
  if (d.destination == d.from) throw StaleDecision("apply_interchange: destination is the source");
  if (d.swap) {
    if (placement.core_of(*d.swap) != d.destination) {
      throw StaleDecision("apply_interchange: swap thread moved or finished");
    }
    // Lift both out first so capacity never blocks the exchange.
    placement.remove(d.victim);
    placement.remove(*d.swap);
    placement.place(d.victim, d.destination);
    placement.place(*d.swap, d.from);
  } else {
    if (!placement.has_room(d.destination)) {
      throw StaleDecision("apply_interchange: destination core is full");
    }
    placement.move(d.victim, d.destination);
  }
}

std::vector<ThreadScore> victim_candidates(const PerfRecord& record,
                                           std::span<const ProcessThreads> processes) {
  std::vector<ThreadScore> out;
  for (const auto& proc : processes) {
    if (proc.threads.size() < 2) continue;
    auto scores = normalized_p(record, proc.threads);
    out.insert(out.end(), scores.begin(), scores.end());
  }
  return out;
}

std::optional<MigrationDecision> imar_step(const PerfRecord& record, const Placement& placement,
                                           const Topology& topo,
                                           std::span<const ProcessThreads> processes,
                                           const TicketParams& params, Rng& rng) {
  const auto candidates = victim_candidates(record, processes);
  if (candidates.empty()) return std::nullopt;
  const ThreadId victim = select_victim(candidates, rng);

  TicketTable table;
  try {
    table = distribute_tickets(record, victim, placement, topo, params);
  } catch (const NoDestinationError&) {
    return std::nullopt;
  }
  if (table.total <= 0) return std::nullopt;

  const TicketEntry& chosen = lottery(table, rng);
  return MigrationDecision{victim, *placement.core_of(victim), chosen.core, chosen.swap};
}

void ControllerState::validate() const {
  if (!(min_period_ms > 0.0)) throw Error("imar2: T_min must be > 0");
  if (min_period_ms > max_period_ms) throw Error("imar2: T_min must not exceed T_max");
  if (period_ms < min_period_ms || period_ms > max_period_ms) {
    throw Error("imar2: T must lie in [T_min, T_max]");
  }
  if (!(omega > 0.0 && omega <= 1.0)) throw Error("imar2: omega must lie in (0, 1]");
}

std::pair<Imar2Action, ControllerState> imar2_step(ControllerState ctrl, double pt_current,
                                                   const PerfRecord& record,
                                                   const Placement& placement,
                                                   const Topology& topo,
                                                   std::span<const ProcessThreads> processes,
                                                   const TicketParams& params, Rng& rng) {
  const double pt_last = ctrl.pt_last.value_or(pt_current);
  Imar2Action action;

  if (pt_current >= ctrl.omega * pt_last) {
    ctrl.period_ms = std::max(ctrl.min_period_ms, ctrl.period_ms / 2.0);
    action.decision = imar_step(record, placement, topo, processes, params, rng);
    action.kind = action.decision ? Imar2Action::Kind::kMigrate : Imar2Action::Kind::kNone;
    ctrl.last_decision = action.decision;
  } else {
    ctrl.period_ms = std::min(ctrl.max_period_ms, ctrl.period_ms * 2.0);
    if (ctrl.last_decision) {
      action.kind = Imar2Action::Kind::kRollback;
      action.decision = ctrl.last_decision;
    }
    ctrl.last_decision.reset();
  }
  ctrl.pt_last = pt_current;
  return {action, ctrl};
}

}  // namespace numamig
