#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "numamig/metrics.hpp"
#include "numamig/scenario.hpp"

namespace numamig {

inline constexpr int kSummarySchemaVersion = 1;

struct RunOptions {
  bool record_trace = true;
};

struct ProcessOutcome {
  ProcessId pid;
  std::optional<double> completion_ms;  // empty if the time limit hit first
};

struct PtPoint {
  double time_ms = 0.0;  // end of the interval
  double pt = 0.0;
};

struct RunResult {
  std::vector<ProcessOutcome> processes;
  std::vector<TraceRow> trace;
  std::vector<PtPoint> pt_series;
  int migrations = 0;  // victim moved to a free slot
  int swaps = 0;       // victim exchanged with another thread
  int rollbacks = 0;
  std::int64_t intervals = 0;
  double end_time_ms = 0.0;
  bool hit_time_limit = false;

  /// Mean completion time over processes; throws if any did not finish.
  double mean_completion_ms() const;
};

/// Runs the scenario to completion (or its time limit). Each interval of
/// the live period: sample every live thread, retire work at the sampled
/// rate, fold P into the record, take the strategy step at the boundary,
/// apply its action, emit trace rows. Deterministic for a given seed.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

struct ProcessComparison {
  ProcessId pid;
  double baseline_ms = 0.0;
  double test_ms = 0.0;
  double percent = 0.0;  // 100 * test / baseline
};

/// Per-process test time as a percentage of the baseline time.
std::vector<ProcessComparison> compare(const RunResult& baseline, const RunResult& test);

/// Runs `scenario` twice, once per strategy, with the same seed.
std::vector<ProcessComparison> compare(const Scenario& scenario, const StrategySpec& baseline,
                                       const StrategySpec& test,
                                       const RunOptions& options = {false});

nlohmann::json summary_json(const Scenario& scenario, const RunResult& result);
nlohmann::json comparison_json(std::span<const ProcessComparison> rows);

}  // namespace numamig
