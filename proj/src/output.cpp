#include "numamig/output.hpp"

#include <fstream>
#include <sstream>

namespace numamig {

namespace fs = std::filesystem;

void write_file_atomically(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename '" + tmp.string() + "': " + ec.message());
  }
}

RunFiles write_run_files(const fs::path& out_dir, const Scenario& scenario,
                         const RunResult& result, std::size_t window) {
  if (window == 0) throw Error("window must be >= 1");
  std::ostringstream trace;
  write_trace_csv(trace, result.trace, window);
  const std::string summary = summary_json(scenario, result).dump(2) + "\n";

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create '" + out_dir.string() + "': " + ec.message());

  RunFiles files{out_dir / "trace.csv", out_dir / "summary.json"};
  write_file_atomically(files.trace_csv, trace.str());
  try {
    write_file_atomically(files.summary_json, summary);
  } catch (...) {
    fs::remove(files.trace_csv);
    throw;
  }
  return files;
}

RunFiles run_preset(std::string_view preset, std::string_view strategy, std::uint64_t seed,
                    const fs::path& out_dir, std::size_t window) {
  if (window == 0) throw Error("window must be >= 1");
  Scenario sc = make_preset(preset);
  sc.strategy = parse_strategy(strategy);
  sc.seed = seed;
  sc.validate();
  return write_run_files(out_dir, sc, run(sc), window);
}

}  // namespace numamig
