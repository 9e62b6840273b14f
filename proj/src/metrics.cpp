#include "numamig/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <unordered_map>

namespace numamig {

void ScoreParams::validate() const {
  for (double e : {alpha, beta, gamma}) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw Error("score params: exponents must be finite and >= 0");
    }
  }
}

double compute_p(const PerfSample& s, const ScoreParams& params) {
  if (!(s.gips > 0.0) || !(s.instb > 0.0) || !(s.latency > 0.0)) {
    throw Error("compute_p: sample components must be > 0");
  }
  return std::pow(s.gips, params.beta) * std::pow(s.instb, params.gamma) /
         std::pow(s.latency, params.alpha);
}

void PerfRecord::update(ThreadId thread, NodeId node, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error("perf record: P must be > 0");
  if (node.value < 0) throw Error("perf record: negative node");
  Entry& e = entries_[thread];
  if (static_cast<int>(e.by_node.size()) <= node.value) e.by_node.resize(node.value + 1);
  e.by_node[node.value] = p;
  e.last_node = node;
}

std::optional<double> PerfRecord::get(ThreadId thread, NodeId node) const {
  auto it = entries_.find(thread);
  if (it == entries_.end() || node.value < 0 ||
      node.value >= static_cast<int>(it->second.by_node.size())) {
    return std::nullopt;
  }
  return it->second.by_node[node.value];
}

std::optional<NodeId> PerfRecord::last_node(ThreadId thread) const {
  auto it = entries_.find(thread);
  if (it == entries_.end()) return std::nullopt;
  return it->second.last_node;
}

std::optional<double> PerfRecord::current(ThreadId thread) const {
  auto node = last_node(thread);
  if (!node) return std::nullopt;
  return get(thread, *node);
}

std::size_t PerfRecord::size() const {
  std::size_t n = 0;
  for (const auto& [_, e] : entries_) {
    n += static_cast<std::size_t>(
        std::count_if(e.by_node.begin(), e.by_node.end(), [](auto& v) { return v.has_value(); }));
  }
  return n;
}

std::vector<ThreadId> PerfRecord::threads() const {
  std::vector<ThreadId> out;
  out.reserve(entries_.size());
  for (const auto& [t, _] : entries_) out.push_back(t);
  return out;
}

std::vector<ThreadScore> normalized_p(const PerfRecord& record,
                                      std::span<const ThreadId> threads) {
  if (threads.empty()) throw Error("normalized_p: process has no sampled threads");
  std::vector<ThreadScore> out;
  out.reserve(threads.size());
  double sum = 0.0;
  for (ThreadId t : threads) {
    auto p = record.current(t);
    if (!p) {
      throw Error("normalized_p: thread " + std::to_string(t.value) + " has no current P");
    }
    out.push_back({t, *p});
    sum += *p;
  }
  const double mean = sum / static_cast<double>(threads.size());
  for (auto& s : out) s.value /= mean;
  return out;
}

double total_performance(const PerfRecord& record) {
  const auto all = record.threads();
  return total_performance(record, all);
}

double total_performance(const PerfRecord& record, std::span<const ThreadId> threads) {
  double sum = 0.0;
  for (ThreadId t : threads) sum += record.current(t).value_or(0.0);
  return sum;
}

std::string_view to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::kNone: return "none";
    case TraceEvent::kMigrate: return "migrate";
    case TraceEvent::kSwap: return "swap";
    case TraceEvent::kRollback: return "rollback";
  }
  return "none";
}

std::vector<TraceRow> frame_average(std::span<const TraceRow> rows, std::size_t window) {
  if (window == 0) throw Error("frame_average: window must be >= 1");

  std::vector<ThreadId> order;
  std::unordered_map<ThreadId, std::vector<const TraceRow*>> per_thread;
  for (const auto& r : rows) {
    auto [it, inserted] = per_thread.try_emplace(r.thread);
    if (inserted) order.push_back(r.thread);
    it->second.push_back(&r);
  }

  struct Block {
    std::size_t thread_rank;
    TraceRow row;
  };
  std::vector<Block> blocks;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& series = per_thread[order[rank]];
    for (std::size_t start = 0; start < series.size(); start += window) {
      const std::size_t end = std::min(series.size(), start + window);
      const double n = static_cast<double>(end - start);
      TraceRow avg = *series[end - 1];
      avg.interval = series[start]->interval;
      avg.time_ms = avg.gips = avg.instb = avg.latency = avg.p = avg.p_hat = 0.0;
      avg.event = TraceEvent::kNone;
      for (std::size_t i = start; i < end; ++i) {
        const TraceRow& r = *series[i];
        avg.time_ms += r.time_ms;
        avg.gips += r.gips;
        avg.instb += r.instb;
        avg.latency += r.latency;
        avg.p += r.p;
        avg.p_hat += r.p_hat;
        if (r.event != TraceEvent::kNone) avg.event = r.event;
      }
      avg.time_ms /= n;
      avg.gips /= n;
      avg.instb /= n;
      avg.latency /= n;
      avg.p /= n;
      avg.p_hat /= n;
      blocks.push_back({rank, avg});
    }
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.row.interval != b.row.interval) return a.row.interval < b.row.interval;
    return a.thread_rank < b.thread_rank;
  });

  std::vector<TraceRow> out;
  out.reserve(blocks.size());
  for (auto& b : blocks) out.push_back(b.row);
  return out;
}

namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows, std::size_t window) {
  out << "# frame_average=" << window
      << " (non-overlapping blocks of consecutive intervals per thread; numeric columns are"
         " block means, interval is the block start, core/node from the block end, event is"
         " the last event inside the block)\n";
  out << "interval,time_ms,thread,process,core,node,gips,instb,latency,p,p_hat,event\n";

  std::vector<TraceRow> averaged;
  std::span<const TraceRow> view = rows;
  if (window > 1) {
    averaged = frame_average(rows, window);
    view = averaged;
  }
  for (const auto& r : view) {
    out << r.interval << ',';
    put_double(out, r.time_ms);
    out << ',' << r.thread.value << ',' << r.process.value << ',' << r.core.value << ','
        << r.node.value << ',';
    put_double(out, r.gips);
    out << ',';
    put_double(out, r.instb);
    out << ',';
    put_double(out, r.latency);
    out << ',';
    put_double(out, r.p);
    out << ',';
    put_double(out, r.p_hat);
    out << ',' << to_string(r.event) << '\n';
  }
}

}  // namespace numamig
