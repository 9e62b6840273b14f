// numamig: run NUMA thread-migration simulations from presets or config files.
//
//   numamig simulate --preset crossed --strategy "imar[1;1,1,1]" --out runs/crossed
//   numamig compare  --preset direct --baseline none --strategy "imar2[1,4;1,1,1;0.97]"
//   numamig sweep    --preset crossed --strategy "imar[1;1,1,1]" --seed 1 --seeds 5
//   numamig preset   crossed            # print the preset as a config file

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "numamig/engine.hpp"
#include "numamig/output.hpp"

namespace fs = std::filesystem;
using namespace numamig;

namespace {

struct Common {
  std::string preset;
  std::string config;
  std::string strategy;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string out = ".";
  std::size_t window = 50;
  std::optional<double> limit_ms;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* preset = cmd->add_option("--preset", c.preset, "Scenario preset")
                     ->check(CLI::IsMember(preset_names()));
  auto* config = cmd->add_option("--config", c.config, "Scenario config file (JSON)")
                     ->check(CLI::ExistingFile);
  preset->excludes(config);
  config->excludes(preset);
  cmd->add_option("--strategy", c.strategy, "none | imar[T;a,b,g] | imar2[Tmin,Tmax;a,b,g;w]");
  cmd->add_option("--seed", c.seed, "Random seed")->each([&](const std::string&) {
    c.seed_set = true;
  });
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--window", c.window, "Frame-average window for trace.csv")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--limit-ms", c.limit_ms, "Simulated time limit in ms")
      ->check(CLI::PositiveNumber);
}

Scenario build_scenario(const Common& c) {
  if (c.preset.empty() == c.config.empty()) {
    throw Error("exactly one of --preset or --config is required");
  }
  Scenario sc = c.preset.empty() ? load_scenario(c.config) : make_preset(c.preset);
  if (!c.strategy.empty()) sc.strategy = parse_strategy(c.strategy);
  if (c.seed_set) sc.seed = c.seed;
  if (c.limit_ms) sc.time_limit_ms = *c.limit_ms;
  sc.validate();
  return sc;
}

void print_times(const RunResult& r) {
  for (const auto& p : r.processes) {
    if (p.completion_ms) {
      std::printf("  process %d: %.1f ms\n", p.pid.value, *p.completion_ms);
    } else {
      std::printf("  process %d: unfinished\n", p.pid.value);
    }
  }
  std::printf("  events: %d migrations, %d swaps, %d rollbacks\n", r.migrations, r.swaps,
              r.rollbacks);
}

int cmd_simulate(const Common& c) {
  const Scenario sc = build_scenario(c);
  const RunResult r = run(sc);
  const RunFiles files = write_run_files(c.out, sc, r, c.window);
  std::printf("%s %s seed=%llu\n", sc.name.c_str(), render(sc.strategy).c_str(),
              static_cast<unsigned long long>(sc.seed));
  print_times(r);
  std::printf("  wrote %s, %s\n", files.trace_csv.c_str(), files.summary_json.c_str());
  return r.hit_time_limit ? 3 : 0;
}

int cmd_compare(const Common& c, const std::string& baseline_text) {
  Scenario sc = build_scenario(c);
  const StrategySpec baseline = parse_strategy(baseline_text);
  const StrategySpec test = sc.strategy;

  Scenario base_sc = sc;
  base_sc.strategy = baseline;
  const RunResult base = run(base_sc, {false});
  const RunResult tested = run(sc, {false});
  const auto rows = compare(base, tested);

  nlohmann::json out = {{"schema_version", kSummarySchemaVersion},
                        {"scenario", to_json(sc)},
                        {"baseline", render(baseline)},
                        {"test", render(test)},
                        {"processes", comparison_json(rows)}};
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw Error("cannot create '" + c.out + "': " + ec.message());
  write_file_atomically(fs::path(c.out) / "compare.json", out.dump(2) + "\n");

  std::printf("%s: %s vs %s (seed %llu)\n", sc.name.c_str(), render(test).c_str(),
              render(baseline).c_str(), static_cast<unsigned long long>(sc.seed));
  for (const auto& row : rows) {
    std::printf("  process %d: %.1f ms vs %.1f ms = %.1f%%\n", row.pid.value, row.test_ms,
                row.baseline_ms, row.percent);
  }
  return 0;
}

int cmd_sweep(const Common& c, int seeds) {
  const Scenario sc = build_scenario(c);
  std::vector<std::future<RunResult>> jobs;
  for (int i = 0; i < seeds; ++i) {
    Scenario s = sc;
    s.seed = sc.seed + static_cast<std::uint64_t>(i);
    jobs.push_back(std::async(std::launch::async, [s] { return run(s); }));
  }

  nlohmann::json per_seed = nlohmann::json::array();
  for (int i = 0; i < seeds; ++i) {
    Scenario s = sc;
    s.seed = sc.seed + static_cast<std::uint64_t>(i);
    const RunResult r = jobs[i].get();
    write_run_files(fs::path(c.out) / ("seed_" + std::to_string(s.seed)), s, r, c.window);
    nlohmann::json entry = {{"seed", s.seed},
                            {"swaps", r.swaps},
                            {"migrations", r.migrations},
                            {"rollbacks", r.rollbacks}};
    entry["mean_completion_ms"] =
        r.hit_time_limit ? nlohmann::json(nullptr) : nlohmann::json(r.mean_completion_ms());
    per_seed.push_back(entry);
    std::printf("seed %llu:\n", static_cast<unsigned long long>(s.seed));
    print_times(r);
  }
  nlohmann::json out = {{"schema_version", kSummarySchemaVersion},
                        {"scenario", to_json(sc)},
                        {"runs", per_seed}};
  write_file_atomically(fs::path(c.out) / "sweep.json", out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NUMA thread-migration simulator (IMAR / IMAR2)"};
  app.require_subcommand(1);

  Common sim, cmp, swp;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario, write trace.csv and summary.json");
  add_common(simulate, sim);

  std::string baseline = "none";
  auto* comparecmd = app.add_subcommand("compare", "Run baseline and test strategies, report % times");
  add_common(comparecmd, cmp);
  comparecmd->add_option("--baseline", baseline, "Baseline strategy");

  int seeds = 5;
  auto* sweep = app.add_subcommand("sweep", "Run consecutive seeds concurrently");
  add_common(sweep, swp);
  sweep->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Print a preset as a config file");
  preset->add_option("name", preset_name, "Preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*comparecmd) return cmd_compare(cmp, baseline);
    if (*sweep) return cmd_sweep(swp, seeds);
    if (*preset) {
      std::cout << to_json(make_preset(preset_name)).dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numamig: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
