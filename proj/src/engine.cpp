#include "numamig/engine.hpp"

#include <algorithm>
#include <unordered_map>

namespace numamig {

using nlohmann::json;

double RunResult::mean_completion_ms() const {
  if (processes.empty()) throw Error("run result has no processes");
  double sum = 0.0;
  for (const auto& p : processes) {
    if (!p.completion_ms) {
      throw Error("process " + std::to_string(p.pid.value) + " did not finish");
    }
    sum += *p.completion_ms;
  }
  return sum / static_cast<double>(processes.size());
}

namespace {

TraceEvent move_event(const MigrationDecision& d) {
  return d.swap ? TraceEvent::kSwap : TraceEvent::kMigrate;
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
  const ResolvedScenario rs = resolve(scenario);
  const Topology& topo = rs.topology;
  const ScoreParams score = score_params(scenario.strategy);
  const double limit = scenario.effective_time_limit_ms();
  const std::size_t num_threads = rs.threads.size();

  Placement placement = rs.initial;
  PerfRecord record;
  Rng rng(scenario.seed);

  std::vector<ThreadProgress> progress(num_threads);
  std::vector<double> finish_ms(num_threads, 0.0);
  for (const auto& info : rs.threads) {
    progress[info.id.value].remaining = rs.specs[info.process_index].total_work;
  }
  std::vector<int> live_per_process(rs.specs.size());
  for (std::size_t j = 0; j < rs.specs.size(); ++j) live_per_process[j] = rs.specs[j].num_threads;

  std::vector<double> latest_finish(rs.specs.size(), 0.0);

  RunResult result;
  for (const auto& spec : rs.specs) result.processes.push_back({spec.pid, std::nullopt});

  double period = scenario.interval_ms;
  std::optional<ControllerState> ctrl;
  if (const auto* imar = std::get_if<ImarConfig>(&scenario.strategy)) {
    period = imar->period_ms;
  } else if (const auto* imar2 = std::get_if<Imar2Config>(&scenario.strategy)) {
    ctrl = ControllerState{imar2->min_period_ms, imar2->min_period_ms, imar2->max_period_ms,
                           imar2->omega, std::nullopt, std::nullopt};
    ctrl->validate();
    period = ctrl->period_ms;
  }

  struct Active {
    const ThreadInfo* info;
    CoreId core;
    PerfSample sample;
    double p = 0.0;
  };
  std::vector<Active> active;
  active.reserve(num_threads);
  std::size_t live = num_threads;
  double now = 0.0;

  while (live > 0 && now < limit) {
    const double interval = period;

    active.clear();
    for (const auto& info : rs.threads) {
      if (progress[info.id.value].finished) continue;
      const CoreId core = *placement.core_of(info.id);
      const auto& spec = rs.specs[info.process_index];
      active.push_back({&info, core,
                        sample(spec, core, rs.data[info.process_index], topo, rng,
                               scenario.local_latency)});
    }

    for (auto& a : active) {
      const ThreadId id = a.info->id;
      const double before = progress[id.value].remaining;
      advance_work(progress[id.value], a.sample.gips, interval);
      a.p = compute_p(a.sample, score);
      record.update(id, topo.node_of(a.core), a.p);
      if (progress[id.value].finished) {
        finish_ms[id.value] = now + before / a.sample.gips * 1000.0;
      }
    }

    // Trace rows carry P̂ over the threads that ran during this interval.
    std::unordered_map<ThreadId, std::size_t> row_of;
    if (options.record_trace) {
      std::vector<std::vector<ThreadId>> ran(rs.specs.size());
      for (const auto& a : active) ran[a.info->process_index].push_back(a.info->id);
      std::unordered_map<ThreadId, double> p_hat;
      for (const auto& threads : ran) {
        if (threads.empty()) continue;
        for (const auto& s : normalized_p(record, threads)) p_hat[s.thread] = s.value;
      }
      for (const auto& a : active) {
        row_of[a.info->id] = result.trace.size();
        result.trace.push_back({result.intervals, now, a.info->id, a.info->pid, a.core,
                                topo.node_of(a.core), a.sample.gips, a.sample.instb,
                                a.sample.latency, a.p, p_hat[a.info->id], TraceEvent::kNone});
      }
    }

    for (const auto& a : active) {
      const ThreadId id = a.info->id;
      if (!progress[id.value].finished) continue;
      placement.remove(id);
      --live;
      const int j = a.info->process_index;
      latest_finish[j] = std::max(latest_finish[j], finish_ms[id.value]);
      if (--live_per_process[j] == 0) result.processes[j].completion_ms = latest_finish[j];
    }

    std::vector<ProcessThreads> groups(rs.specs.size());
    std::vector<ThreadId> live_threads;
    for (std::size_t j = 0; j < rs.specs.size(); ++j) groups[j].pid = rs.specs[j].pid;
    for (const auto& a : active) {
      if (progress[a.info->id.value].finished) continue;
      groups[a.info->process_index].threads.push_back(a.info->id);
      live_threads.push_back(a.info->id);
    }
    const double pt = total_performance(record, live_threads);
    result.pt_series.push_back({now + interval, pt});

    auto tag = [&](ThreadId victim, TraceEvent e) {
      if (auto it = row_of.find(victim); it != row_of.end()) result.trace[it->second].event = e;
    };

    if (live > 0) {
      std::optional<MigrationDecision> move;
      if (std::holds_alternative<ImarConfig>(scenario.strategy)) {
        move = imar_step(record, placement, topo, groups, scenario.tickets, rng);
      } else if (ctrl) {
        auto [action, next] =
            imar2_step(*ctrl, pt, record, placement, topo, groups, scenario.tickets, rng);
        ctrl = next;
        period = ctrl->period_ms;
        if (action.kind == Imar2Action::Kind::kMigrate) {
          move = action.decision;
        } else if (action.kind == Imar2Action::Kind::kRollback) {
          try {
            apply_interchange(placement, inverse(*action.decision));
            ++result.rollbacks;
            tag(action.decision->victim, TraceEvent::kRollback);
          } catch (const StaleDecision&) {
            // A thread of the undone move has finished; nothing to restore.
          }
        }
      }
      if (move) {
        apply_interchange(placement, *move);
        ++(move->swap ? result.swaps : result.migrations);
        tag(move->victim, move_event(*move));
      }
    }

    now += interval;
    ++result.intervals;
  }

  result.end_time_ms = now;
  result.hit_time_limit = live > 0;
  return result;
}

std::vector<ProcessComparison> compare(const RunResult& baseline, const RunResult& test) {
  if (baseline.processes.size() != test.processes.size()) {
    throw Error("compare: runs have different processes");
  }
  std::vector<ProcessComparison> out;
  for (std::size_t j = 0; j < baseline.processes.size(); ++j) {
    const auto& b = baseline.processes[j];
    const auto& t = test.processes[j];
    if (b.pid != t.pid) throw Error("compare: runs have different processes");
    if (!b.completion_ms || !t.completion_ms) {
      throw Error("compare: process " + std::to_string(b.pid.value) + " did not finish");
    }
    out.push_back({b.pid, *b.completion_ms, *t.completion_ms,
                   100.0 * *t.completion_ms / *b.completion_ms});
  }
  return out;
}

std::vector<ProcessComparison> compare(const Scenario& scenario, const StrategySpec& baseline,
                                       const StrategySpec& test, const RunOptions& options) {
  Scenario a = scenario;
  a.strategy = baseline;
  Scenario b = scenario;
  b.strategy = test;
  return compare(run(a, options), run(b, options));
}

json summary_json(const Scenario& scenario, const RunResult& result) {
  json procs = json::array();
  for (const auto& p : result.processes) {
    procs.push_back({{"pid", p.pid.value},
                     {"finished", p.completion_ms.has_value()},
                     {"completion_ms", p.completion_ms ? json(*p.completion_ms) : json(nullptr)}});
  }
  json pt_series = json::array();
  for (const auto& p : result.pt_series) pt_series.push_back({p.time_ms, p.pt});
  return {{"schema_version", kSummarySchemaVersion},
          {"scenario", to_json(scenario)},
          {"processes", procs},
          {"events",
           {{"migrations", result.migrations},
            {"swaps", result.swaps},
            {"rollbacks", result.rollbacks}}},
          {"intervals", result.intervals},
          {"end_time_ms", result.end_time_ms},
          {"hit_time_limit", result.hit_time_limit},
          {"pt_series", pt_series}};
}

json comparison_json(std::span<const ProcessComparison> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"pid", r.pid.value},
                   {"baseline_ms", r.baseline_ms},
                   {"test_ms", r.test_ms},
                   {"percent", r.percent}});
  }
  return out;
}

}  // namespace numamig
