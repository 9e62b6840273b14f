#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "numamig/ids.hpp"
#include "numamig/workload.hpp"

namespace numamig {

/// Exponents of the weighted-product score: latency^alpha in the
/// denominator, gips^beta and instb^gamma in the numerator.
struct ScoreParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  void validate() const;
  friend bool operator==(const ScoreParams&, const ScoreParams&) = default;
};

/// P = gips^beta * instb^gamma / latency^alpha. Larger is better.
double compute_p(const PerfSample& s, const ScoreParams& params);

/// Latest P observed for each (thread, node) and the node each thread last
/// ran on. New observations replace old ones; keys are never removed.
class PerfRecord {
 public:
  void update(ThreadId thread, NodeId node, double p);

  std::optional<double> get(ThreadId thread, NodeId node) const;
  std::optional<NodeId> last_node(ThreadId thread) const;
  /// P at the thread's last node.
  std::optional<double> current(ThreadId thread) const;

  /// Number of (thread, node) keys stored.
  std::size_t size() const;
  std::vector<ThreadId> threads() const;

 private:
  struct Entry {
    std::vector<std::optional<double>> by_node;
    NodeId last_node;
  };
  std::map<ThreadId, Entry> entries_;
};

struct ThreadScore {
  ThreadId thread;
  double value = 0.0;
};

/// Each thread's current P divided by the mean current P over `threads`
/// (the live threads of one process). Output order follows the input.
std::vector<ThreadScore> normalized_p(const PerfRecord& record,
                                      std::span<const ThreadId> threads);

/// Sum of current P over every thread in the record.
double total_performance(const PerfRecord& record);
/// Sum of current P over `threads` only (threads without data contribute 0).
double total_performance(const PerfRecord& record, std::span<const ThreadId> threads);

enum class TraceEvent : std::uint8_t { kNone, kMigrate, kSwap, kRollback };

std::string_view to_string(TraceEvent e);

struct TraceRow {
  std::int64_t interval = 0;
  double time_ms = 0.0;
  ThreadId thread;
  ProcessId process;
  CoreId core;
  NodeId node;
  double gips = 0.0;
  double instb = 0.0;
  double latency = 0.0;
  double p = 0.0;
  double p_hat = 0.0;
  TraceEvent event = TraceEvent::kNone;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Non-overlapping block means per thread. Each output row averages up to
/// `window` consecutive rows of one thread: numeric columns are means,
/// `interval` is the block's first interval, core/node come from the block's
/// last row, and the last event inside the block is kept. Rows are ordered
/// by block start, then by first appearance of the thread.
std::vector<TraceRow> frame_average(std::span<const TraceRow> rows, std::size_t window = 50);

/// CSV with a '#' comment line describing the averaging, then a fixed header:
/// interval,time_ms,thread,process,core,node,gips,instb,latency,p,p_hat,event
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows, std::size_t window);

}  // namespace numamig
