#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "numamig/ids.hpp"
#include "numamig/metrics.hpp"
#include "numamig/placement.hpp"
#include "numamig/topology.hpp"

namespace numamig {

/// Ticket awards for the destination lottery.
///   b1/b2/b3: victim on the destination node was worse / unknown / not worse
///   b4/b5/b6: swap thread on the victim's node was worse / unknown / not worse
///   b7: destination core has a free slot
struct TicketParams {
  int b1 = 1;
  int b2 = 2;
  int b3 = 4;
  int b4 = 1;
  int b5 = 2;
  int b6 = 4;
  int b7 = 3;

  void validate() const;
  friend bool operator==(const TicketParams&, const TicketParams&) = default;
};

struct TicketEntry {
  CoreId core;
  std::optional<ThreadId> swap;
  int tickets = 0;

  friend bool operator==(const TicketEntry&, const TicketEntry&) = default;
};

/// Entries are ordered by core, then swap thread, with the free-slot entry
/// of a core last. Zero-ticket entries are dropped.
struct TicketTable {
  std::vector<TicketEntry> entries;
  int total = 0;
};

struct MigrationDecision {
  ThreadId victim;
  CoreId from;         // victim's core before the move
  CoreId destination;  // swap thread's core before the move, if any
  std::optional<ThreadId> swap;

  friend bool operator==(const MigrationDecision&, const MigrationDecision&) = default;
};

/// The decision that undoes `d` when applied right after it.
MigrationDecision inverse(const MigrationDecision& d);

/// Thrown when the victim's node is the only node.
class NoDestinationError : public Error {
 public:
  using Error::Error;
};

/// Thrown when a lottery has no tickets.
class NoFeasibleMigration : public Error {
 public:
  using Error::Error;
};

/// Thrown when a decision no longer matches the placement it is applied to.
class StaleDecision : public Error {
 public:
  using Error::Error;
};

/// Relative tolerance under which two normalized scores count as tied.
inline constexpr double kScoreTieTolerance = 1e-9;

/// Lowest normalized score; ties are broken uniformly at random.
ThreadId select_victim(std::span<const ThreadScore> scores, Rng& rng);

TicketTable distribute_tickets(const PerfRecord& record, ThreadId victim,
                               const Placement& placement, const Topology& topo,
                               const TicketParams& params);

/// The entry holding ticket number `ticket` (0-based, in table order).
const TicketEntry& draw_ticket(const TicketTable& table, int ticket);

/// Picks an entry with probability tickets / total.
const TicketEntry& lottery(const TicketTable& table, Rng& rng);

/// Victim to the destination; the swap thread, if any, to the victim's
/// former core. Throws StaleDecision if either thread is not where the
/// decision expects it, or the destination has no room for a plain move.
void apply_interchange(Placement& placement, const MigrationDecision& d);

/// Live threads of one process.
struct ProcessThreads {
  ProcessId pid;
  std::vector<ThreadId> threads;
};

/// Normalized scores of every thread that can be a victim: threads of
/// processes with at least two live threads.
std::vector<ThreadScore> victim_candidates(const PerfRecord& record,
                                           std::span<const ProcessThreads> processes);

/// One IMAR decision: victim, tickets, lottery. Empty when no process has
/// two live threads or no destination earns tickets.
std::optional<MigrationDecision> imar_step(const PerfRecord& record, const Placement& placement,
                                           const Topology& topo,
                                           std::span<const ProcessThreads> processes,
                                           const TicketParams& params, Rng& rng);

struct ControllerState {
  double period_ms = 1.0;
  double min_period_ms = 1.0;
  double max_period_ms = 4.0;
  double omega = 1.0;
  std::optional<double> pt_last;  // empty before the first step
  std::optional<MigrationDecision> last_decision;

  void validate() const;
};

struct Imar2Action {
  enum class Kind { kNone, kMigrate, kRollback };
  Kind kind = Kind::kNone;
  /// For kMigrate the decision to apply; for kRollback the decision to undo.
  std::optional<MigrationDecision> decision;
};

/// One IMAR² boundary. If pt_current >= omega * pt_last the period halves
/// (clamped) and a new IMAR migration is attempted; otherwise the period
/// doubles (clamped) and the last migration, if any, is rolled back with
/// no new migration. The first call treats pt_last as pt_current.
std::pair<Imar2Action, ControllerState> imar2_step(ControllerState ctrl, double pt_current,
                                                   const PerfRecord& record,
                                                   const Placement& placement,
                                                   const Topology& topo,
                                                   std::span<const ProcessThreads> processes,
                                                   const TicketParams& params, Rng& rng);

}  // namespace numamig
