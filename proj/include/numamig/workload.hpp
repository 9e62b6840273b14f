#pragma once

#include <span>
#include <vector>

#include "numamig/ids.hpp"
#include "numamig/topology.hpp"

namespace numamig {

/// Default mean latency of a local memory access, in cycles.
inline constexpr double kDefaultLocalLatency = 200.0;

struct ProcessSpec {
  ProcessId pid;
  int num_threads = 1;
  double mem_intensity = 1.0;  // in [0, 1]
  double base_gips = 1.0;      // giga-instructions per second at local latency
  double base_instb = 1.0;     // instructions per byte of DRAM traffic
  double total_work = 1.0;     // giga-instructions per thread
  double noise_sigma = 0.0;    // lognormal shape parameter

  void validate() const;
};

/// Fraction of a process's data living in each memory cell.
class DataPlacement {
 public:
  DataPlacement() = default;
  explicit DataPlacement(std::vector<double> weights);

  static DataPlacement local_to(NodeId cell, int num_cells);
  static DataPlacement interleaved(int num_cells);

  std::span<const double> weights() const { return weights_; }
  int num_cells() const { return static_cast<int>(weights_.size()); }

 private:
  std::vector<double> weights_;
};

struct PerfSample {
  double gips = 0.0;
  double instb = 0.0;
  double latency = 0.0;  // cycles
};

/// Synthetic counter reading for one thread on `core` over one interval.
///
///   latency = L_local * sum_d w_d * distance[node(core)][d] * e1
///   gips    = base_gips / (1 + m * (latency0 / L_local - 1)) * e2
///   instb   = base_instb * e3
///
/// where latency0 is the noise-free latency and e1..e3 are exp(sigma * z)
/// for three standard normals drawn from `rng` in that order. Draws happen
/// even when sigma is 0 so the stream does not depend on the noise level.
PerfSample sample(const ProcessSpec& spec, CoreId core, const DataPlacement& data,
                  const Topology& topo, Rng& rng, double local_latency = kDefaultLocalLatency);

/// Remaining work of one thread.
struct ThreadProgress {
  double remaining = 0.0;  // giga-instructions
  bool finished = false;
};

/// Retires `gips * interval_ms / 1000` giga-instructions. Overshoot is
/// clamped to zero and marks the thread finished.
double advance_work(ThreadProgress& progress, double gips, double interval_ms);

}  // namespace numamig
