#include "numamig/workload.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace numamig {

void ProcessSpec::validate() const {
  const std::string who = "process " + std::to_string(pid.value) + ": ";
  if (num_threads < 1) throw Error(who + "num_threads must be >= 1");
  if (!(mem_intensity >= 0.0 && mem_intensity <= 1.0)) {
    throw Error(who + "mem_intensity must lie in [0, 1]");
  }
  if (!(base_gips > 0.0) || !std::isfinite(base_gips)) throw Error(who + "base_gips must be > 0");
  if (!(base_instb > 0.0) || !std::isfinite(base_instb)) {
    throw Error(who + "base_instb must be > 0");
  }
  if (!(total_work > 0.0) || !std::isfinite(total_work)) {
    throw Error(who + "total_work must be > 0");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(who + "noise_sigma must be >= 0");
  }
}

DataPlacement::DataPlacement(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("data placement: no cells");
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("data placement: weights must be >= 0");
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw Error("data placement: weights must sum to 1");
}

DataPlacement DataPlacement::local_to(NodeId cell, int num_cells) {
  if (cell.value < 0 || cell.value >= num_cells) throw Error("data placement: cell out of range");
  std::vector<double> w(num_cells, 0.0);
  w[cell.value] = 1.0;
  return DataPlacement(std::move(w));
}

DataPlacement DataPlacement::interleaved(int num_cells) {
  if (num_cells < 1) throw Error("data placement: no cells");
  return DataPlacement(std::vector<double>(num_cells, 1.0 / num_cells));
}

PerfSample sample(const ProcessSpec& spec, CoreId core, const DataPlacement& data,
                  const Topology& topo, Rng& rng, double local_latency) {
  if (data.num_cells() != topo.num_nodes()) {
    throw Error("sample: data placement does not match topology");
  }
  const NodeId node = topo.node_of(core);
  double factor = 0.0;
  for (int d = 0; d < data.num_cells(); ++d) {
    factor += data.weights()[d] * topo.distance(node, NodeId{d});
  }

  std::normal_distribution<double> z;
  const double e_latency = std::exp(spec.noise_sigma * z(rng));
  const double e_gips = std::exp(spec.noise_sigma * z(rng));
  const double e_instb = std::exp(spec.noise_sigma * z(rng));

  PerfSample s;
  s.latency = local_latency * factor * e_latency;
  s.gips = spec.base_gips / (1.0 + spec.mem_intensity * (factor - 1.0)) * e_gips;
  s.instb = spec.base_instb * e_instb;
  return s;
}

double advance_work(ThreadProgress& progress, double gips, double interval_ms) {
  if (interval_ms < 0.0) throw Error("advance_work: negative interval");
  if (progress.finished || progress.remaining <= 0.0) {
    throw Error("advance_work: thread already finished");
  }
  progress.remaining -= gips * interval_ms / 1000.0;
  if (progress.remaining <= 0.0) {
    progress.remaining = 0.0;
    progress.finished = true;
  }
  return progress.remaining;
}

}  // namespace numamig
