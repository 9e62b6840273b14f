#include "numamig/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace numamig {

using nlohmann::json;

std::string_view to_string(ThreadPolicy p) {
  return p == ThreadPolicy::kFree ? "free" : "pinned";
}

std::string_view to_string(DataPolicy p) {
  switch (p) {
    case DataPolicy::kFree: return "free";
    case DataPolicy::kDirect: return "direct";
    case DataPolicy::kInterleave: return "interleave";
    case DataPolicy::kCrossed: return "crossed";
    case DataPolicy::kExplicit: return "explicit";
  }
  return "direct";
}

namespace {

ThreadPolicy thread_policy_from(std::string_view s) {
  if (s == "free") return ThreadPolicy::kFree;
  if (s == "pinned") return ThreadPolicy::kPinned;
  throw Error("config: unknown thread_placement '" + std::string(s) + "'");
}

DataPolicy data_policy_from(std::string_view s) {
  for (auto p : {DataPolicy::kFree, DataPolicy::kDirect, DataPolicy::kInterleave,
                 DataPolicy::kCrossed, DataPolicy::kExplicit}) {
    if (to_string(p) == s) return p;
  }
  throw Error("config: unknown data_placement '" + std::string(s) + "'");
}

}  // namespace

Topology TopologyConfig::build() const {
  if (distance) return Topology::with_matrix(nodes, cores_per_node, *distance);
  return Topology::uniform(nodes, cores_per_node, remote_factor);
}

double Scenario::effective_time_limit_ms() const {
  if (time_limit_ms) return *time_limit_ms;
  double slowest = 0.0;
  for (const auto& p : processes) {
    slowest = std::max(slowest, p.spec.total_work / p.spec.base_gips * 1000.0);
  }
  return 10.0 * slowest;
}

void Scenario::validate() const {
  (void)resolve(*this);
}

NodeId crossed_cell(NodeId node, int num_nodes) {
  if (num_nodes % 2 != 0) {
    throw Error("crossed data placement needs an even number of nodes");
  }
  return NodeId{node.value ^ 1};
}

ResolvedScenario resolve(const Scenario& sc) {
  if (sc.processes.empty()) throw Error("scenario: no processes");
  if (!(sc.local_latency > 0.0)) throw Error("scenario: local latency must be > 0");
  if (!(sc.interval_ms > 0.0)) throw Error("scenario: interval_ms must be > 0");
  if (sc.time_limit_ms && !(*sc.time_limit_ms > 0.0)) {
    throw Error("scenario: time_limit_ms must be > 0");
  }
  validate(sc.strategy);
  sc.tickets.validate();

  Topology topo = sc.topology.build();
  const int n = topo.num_nodes();
  Placement placement(topo.num_cores(), sc.topology.core_capacity);

  std::set<ProcessId> seen;
  int total_threads = 0;
  for (const auto& p : sc.processes) {
    p.spec.validate();
    if (!seen.insert(p.spec.pid).second) {
      throw Error("scenario: duplicate pid " + std::to_string(p.spec.pid.value));
    }
    total_threads += p.spec.num_threads;
  }
  if (total_threads > topo.num_cores() * sc.topology.core_capacity) {
    throw Error("scenario: " + std::to_string(total_threads) + " threads exceed " +
                std::to_string(topo.num_cores() * sc.topology.core_capacity) + " core slots");
  }

  ResolvedScenario out{topo, {}, {}, {}, Placement{}};

  // Fills free slots starting at `start`, wrapping around the machine.
  auto next_free = [&](NodeId start) {
    for (int i = 0; i < topo.num_cores(); ++i) {
      CoreId c{(start.value * topo.cores_per_node() + i) % topo.num_cores()};
      if (placement.has_room(c)) return c;
    }
    throw Error("scenario: no free core left");
  };

  int next_id = 0;
  for (int pi = 0; pi < static_cast<int>(sc.processes.size()); ++pi) {
    const auto& p = sc.processes[pi];
    std::vector<CoreId> cores;
    if (sc.thread_policy == ThreadPolicy::kPinned && !p.cores.empty()) {
      if (static_cast<int>(p.cores.size()) != p.spec.num_threads) {
        throw Error("scenario: process " + std::to_string(p.spec.pid.value) +
                    " lists a core count different from its thread count");
      }
      cores = p.cores;
    } else {
      NodeId start{pi % n};
      if (sc.thread_policy == ThreadPolicy::kPinned && p.node) {
        if (!topo.valid_node(*p.node)) throw Error("scenario: pinned node out of range");
        start = *p.node;
      }
      for (int t = 0; t < p.spec.num_threads; ++t) {
        CoreId c = next_free(start);
        if (sc.thread_policy == ThreadPolicy::kPinned && p.node && topo.node_of(c) != *p.node) {
          throw Error("scenario: process " + std::to_string(p.spec.pid.value) +
                      " does not fit on node " + std::to_string(p.node->value));
        }
        placement.place(ThreadId{next_id + t}, c);
        cores.push_back(c);
      }
    }
    const bool explicit_cores = sc.thread_policy == ThreadPolicy::kPinned && !p.cores.empty();

    std::vector<double> first_touch(n, 0.0);
    for (int t = 0; t < p.spec.num_threads; ++t) {
      const ThreadId id{next_id + t};
      if (explicit_cores) {
        if (!topo.valid_core(cores[t])) throw Error("scenario: pinned core out of range");
        placement.place(id, cores[t]);
      }
      first_touch[topo.node_of(cores[t]).value] += 1.0 / p.spec.num_threads;
      out.threads.push_back({id, p.spec.pid, pi, t});
    }
    next_id += p.spec.num_threads;

    const NodeId home = topo.node_of(cores.front());
    switch (sc.data_policy) {
      case DataPolicy::kFree: {
        // Weights must sum to exactly 1 within tolerance; renormalize rounding.
        double sum = 0.0;
        for (double w : first_touch) sum += w;
        for (double& w : first_touch) w /= sum;
        out.data.emplace_back(first_touch);
        break;
      }
      case DataPolicy::kDirect: out.data.push_back(DataPlacement::local_to(home, n)); break;
      case DataPolicy::kInterleave: out.data.push_back(DataPlacement::interleaved(n)); break;
      case DataPolicy::kCrossed:
        out.data.push_back(DataPlacement::local_to(crossed_cell(home, n), n));
        break;
      case DataPolicy::kExplicit:
        if (static_cast<int>(p.weights.size()) != n) {
          throw Error("scenario: process " + std::to_string(p.spec.pid.value) +
                      " needs one data weight per cell");
        }
        out.data.emplace_back(p.weights);
        break;
    }
    out.specs.push_back(p.spec);
  }
  out.initial = std::move(placement);
  return out;
}

std::vector<std::string> preset_names() {
  return {"free", "direct", "interleave", "crossed", "mixed"};
}

Scenario make_preset(std::string_view name) {
  Scenario sc;
  sc.name = std::string(name);
  sc.topology = TopologyConfig{};
  sc.strategy = NoMigration{};

  auto homogeneous = [&] {
    for (int j = 0; j < 4; ++j) {
      ProcessConfig p;
      p.spec.pid = ProcessId{j};
      p.spec.num_threads = 8;
      p.spec.mem_intensity = 1.0;
      p.spec.base_gips = 2.0;
      p.spec.base_instb = 0.5;
      p.spec.total_work = 4.0;
      p.spec.noise_sigma = 0.02;
      p.node = NodeId{j};
      sc.processes.push_back(p);
    }
  };

  if (name == "free") {
    homogeneous();
    for (auto& p : sc.processes) p.node.reset();
    sc.thread_policy = ThreadPolicy::kFree;
    sc.data_policy = DataPolicy::kFree;
  } else if (name == "direct") {
    homogeneous();
    sc.data_policy = DataPolicy::kDirect;
  } else if (name == "interleave") {
    homogeneous();
    sc.data_policy = DataPolicy::kInterleave;
  } else if (name == "crossed") {
    homogeneous();
    sc.data_policy = DataPolicy::kCrossed;
  } else if (name == "mixed") {
    struct Shape {
      double intensity, gips, instb, work;
    };
    // Two memory-bound low-instB codes, two compute-leaning high-instB codes.
    const Shape shapes[] = {{1.0, 2.0, 0.5, 4.0}, {1.0, 1.8, 0.4, 4.5},
                            {0.35, 2.2, 4.0, 4.0}, {0.5, 2.0, 3.0, 4.0}};
    for (int j = 0; j < 4; ++j) {
      ProcessConfig p;
      p.spec.pid = ProcessId{j};
      p.spec.num_threads = 8;
      p.spec.mem_intensity = shapes[j].intensity;
      p.spec.base_gips = shapes[j].gips;
      p.spec.base_instb = shapes[j].instb;
      p.spec.total_work = shapes[j].work;
      p.spec.noise_sigma = 0.02;
      p.node = NodeId{j};
      sc.processes.push_back(p);
    }
    sc.data_policy = DataPolicy::kDirect;
  } else {
    throw Error("unknown preset '" + std::string(name) + "'");
  }
  return sc;
}

json to_json(const Scenario& sc) {
  json topo = {{"nodes", sc.topology.nodes},
               {"cores_per_node", sc.topology.cores_per_node},
               {"remote_factor", sc.topology.remote_factor},
               {"core_capacity", sc.topology.core_capacity}};
  if (sc.topology.distance) topo["distance"] = *sc.topology.distance;

  json procs = json::array();
  for (const auto& p : sc.processes) {
    json jp = {{"pid", p.spec.pid.value},
               {"threads", p.spec.num_threads},
               {"mem_intensity", p.spec.mem_intensity},
               {"base_gips", p.spec.base_gips},
               {"base_instb", p.spec.base_instb},
               {"total_work", p.spec.total_work},
               {"noise_sigma", p.spec.noise_sigma}};
    if (p.node) jp["node"] = p.node->value;
    if (!p.cores.empty()) {
      json cores = json::array();
      for (auto c : p.cores) cores.push_back(c.value);
      jp["cores"] = cores;
    }
    if (!p.weights.empty()) jp["weights"] = p.weights;
    procs.push_back(jp);
  }

  const auto& t = sc.tickets;
  json j = {{"schema_version", kConfigSchemaVersion},
            {"name", sc.name},
            {"topology", topo},
            {"local_latency_cycles", sc.local_latency},
            {"thread_placement", to_string(sc.thread_policy)},
            {"data_placement", to_string(sc.data_policy)},
            {"processes", procs},
            {"strategy", render(sc.strategy)},
            {"tickets",
             {{"b1", t.b1}, {"b2", t.b2}, {"b3", t.b3}, {"b4", t.b4}, {"b5", t.b5},
              {"b6", t.b6}, {"b7", t.b7}}},
            {"interval_ms", sc.interval_ms},
            {"seed", sc.seed}};
  j["time_limit_ms"] = sc.time_limit_ms ? json(*sc.time_limit_ms) : json(nullptr);
  return j;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error("config: unknown key '" + key + "' in " + std::string(where));
    }
  }
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error("config: top level must be an object");
    reject_unknown(j,
                   {"schema_version", "name", "topology", "local_latency_cycles",
                    "thread_placement", "data_placement", "processes", "strategy", "tickets",
                    "interval_ms", "seed", "time_limit_ms"},
                   "config");
    if (j.value("schema_version", kConfigSchemaVersion) != kConfigSchemaVersion) {
      throw Error("config: unsupported schema_version");
    }
    Scenario sc;
    sc.name = j.value("name", std::string("custom"));

    if (j.contains("topology")) {
      const json& t = j.at("topology");
      reject_unknown(t, {"nodes", "cores_per_node", "remote_factor", "distance", "core_capacity"},
                     "topology");
      sc.topology.nodes = t.value("nodes", sc.topology.nodes);
      sc.topology.cores_per_node = t.value("cores_per_node", sc.topology.cores_per_node);
      sc.topology.remote_factor = t.value("remote_factor", sc.topology.remote_factor);
      sc.topology.core_capacity = t.value("core_capacity", sc.topology.core_capacity);
      if (t.contains("distance")) sc.topology.distance = t.at("distance").get<Topology::Matrix>();
    }
    sc.local_latency = j.value("local_latency_cycles", sc.local_latency);
    sc.thread_policy = thread_policy_from(j.value("thread_placement", std::string("pinned")));
    sc.data_policy = data_policy_from(j.value("data_placement", std::string("direct")));

    for (const json& jp : j.at("processes")) {
      reject_unknown(jp,
                     {"pid", "threads", "mem_intensity", "base_gips", "base_instb", "total_work",
                      "noise_sigma", "node", "cores", "weights"},
                     "process");
      ProcessConfig p;
      p.spec.pid = ProcessId{jp.at("pid").get<int>()};
      p.spec.num_threads = jp.at("threads").get<int>();
      p.spec.mem_intensity = jp.value("mem_intensity", p.spec.mem_intensity);
      p.spec.base_gips = jp.at("base_gips").get<double>();
      p.spec.base_instb = jp.at("base_instb").get<double>();
      p.spec.total_work = jp.at("total_work").get<double>();
      p.spec.noise_sigma = jp.value("noise_sigma", 0.0);
      if (jp.contains("node")) p.node = NodeId{jp.at("node").get<int>()};
      if (jp.contains("cores")) {
        for (int c : jp.at("cores").get<std::vector<int>>()) p.cores.emplace_back(c);
      }
      if (jp.contains("weights")) p.weights = jp.at("weights").get<std::vector<double>>();
      sc.processes.push_back(std::move(p));
    }

    sc.strategy = parse_strategy(j.value("strategy", std::string("none")));
    if (j.contains("tickets")) {
      const json& t = j.at("tickets");
      reject_unknown(t, {"b1", "b2", "b3", "b4", "b5", "b6", "b7"}, "tickets");
      sc.tickets.b1 = t.value("b1", sc.tickets.b1);
      sc.tickets.b2 = t.value("b2", sc.tickets.b2);
      sc.tickets.b3 = t.value("b3", sc.tickets.b3);
      sc.tickets.b4 = t.value("b4", sc.tickets.b4);
      sc.tickets.b5 = t.value("b5", sc.tickets.b5);
      sc.tickets.b6 = t.value("b6", sc.tickets.b6);
      sc.tickets.b7 = t.value("b7", sc.tickets.b7);
    }
    sc.interval_ms = j.value("interval_ms", sc.interval_ms);
    sc.seed = j.value("seed", sc.seed);
    if (j.contains("time_limit_ms") && !j.at("time_limit_ms").is_null()) {
      sc.time_limit_ms = j.at("time_limit_ms").get<double>();
    }
    sc.validate();
    return sc;
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("config: " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace numamig
