#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "numamig/engine.hpp"

namespace numamig {

struct RunFiles {
  std::filesystem::path trace_csv;
  std::filesystem::path summary_json;
};

/// Writes `contents` to `path` via a sibling temporary file and a rename,
/// so a failed write never leaves a partial file behind.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

/// trace.csv (frame-averaged with `window`) and summary.json under `out_dir`.
RunFiles write_run_files(const std::filesystem::path& out_dir, const Scenario& scenario,
                         const RunResult& result, std::size_t window);

/// Builds the named preset, sets strategy and seed, runs it and writes the
/// run files. Validation happens before anything touches `out_dir`.
RunFiles run_preset(std::string_view preset, std::string_view strategy, std::uint64_t seed,
                    const std::filesystem::path& out_dir, std::size_t window = 50);

}  // namespace numamig
