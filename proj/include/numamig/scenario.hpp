#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "numamig/placement.hpp"
#include "numamig/strategy.hpp"
#include "numamig/strategy_spec.hpp"
#include "numamig/topology.hpp"
#include "numamig/workload.hpp"

namespace numamig {

inline constexpr int kConfigSchemaVersion = 1;

enum class ThreadPolicy { kFree, kPinned };
enum class DataPolicy { kFree, kDirect, kInterleave, kCrossed, kExplicit };

std::string_view to_string(ThreadPolicy p);
std::string_view to_string(DataPolicy p);

struct TopologyConfig {
  int nodes = 4;
  int cores_per_node = 8;
  double remote_factor = 6.0;
  std::optional<Topology::Matrix> distance;  // overrides remote_factor
  int core_capacity = 1;

  Topology build() const;
};

struct ProcessConfig {
  ProcessSpec spec;
  std::optional<NodeId> node;   // pinned: fill this node's cores in order
  std::vector<CoreId> cores;    // pinned: explicit cores, one per thread
  std::vector<double> weights;  // explicit data placement
};

struct Scenario {
  std::string name = "custom";
  TopologyConfig topology;
  double local_latency = kDefaultLocalLatency;
  std::vector<ProcessConfig> processes;
  ThreadPolicy thread_policy = ThreadPolicy::kPinned;
  DataPolicy data_policy = DataPolicy::kDirect;
  StrategySpec strategy = NoMigration{};
  TicketParams tickets;
  double interval_ms = 1.0;  // sampling period when the strategy has none
  std::uint64_t seed = 1;
  std::optional<double> time_limit_ms;

  /// Explicit limit, or 10x the slowest process's all-local run time.
  double effective_time_limit_ms() const;
  void validate() const;
};

/// Thread identity: global thread ids are dense, assigned in process order.
struct ThreadInfo {
  ThreadId id;
  ProcessId pid;
  int process_index = 0;  // index into Scenario::processes
  int thread_index = 0;   // index within its process
};

/// A scenario expanded into concrete simulator inputs.
struct ResolvedScenario {
  Topology topology;
  std::vector<ProcessSpec> specs;
  std::vector<DataPlacement> data;
  std::vector<ThreadInfo> threads;
  Placement initial;
};

ResolvedScenario resolve(const Scenario& scenario);

/// Crossed data pairing: node k's data lives in cell k xor 1.
NodeId crossed_cell(NodeId node, int num_nodes);

/// Preset names: free, direct, interleave, crossed (four identical
/// memory-bound processes) and mixed (direct placement, two low-instB
/// memory-bound and two high-instB compute-leaning processes).
std::vector<std::string> preset_names();
Scenario make_preset(std::string_view name);

nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

}  // namespace numamig
