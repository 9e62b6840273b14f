#include "numamig/topology.hpp"

#include <cmath>
#include <string>

namespace numamig {

namespace {

void check_counts(int num_nodes, int cores_per_node) {
  if (num_nodes < 1) {
    throw Error("topology: num_nodes must be >= 1, got " + std::to_string(num_nodes));
  }
  if (cores_per_node < 1) {
    throw Error("topology: cores_per_node must be >= 1, got " +
                std::to_string(cores_per_node));
  }
}

}  // namespace

Topology::Topology(int num_nodes, int cores_per_node, Matrix distance)
    : num_nodes_(num_nodes), cores_per_node_(cores_per_node), distance_(std::move(distance)) {}

Topology Topology::uniform(int num_nodes, int cores_per_node, double remote_factor) {
  check_counts(num_nodes, cores_per_node);
  if (num_nodes > 1 && !(remote_factor > 0.0 && std::isfinite(remote_factor))) {
    throw Error("topology: remote_factor must be finite and > 0");
  }
  Matrix m(num_nodes, std::vector<double>(num_nodes, remote_factor));
  for (int k = 0; k < num_nodes; ++k) m[k][k] = 1.0;
  return Topology(num_nodes, cores_per_node, std::move(m));
}

Topology Topology::with_matrix(int num_nodes, int cores_per_node, Matrix distance) {
  check_counts(num_nodes, cores_per_node);
  if (static_cast<int>(distance.size()) != num_nodes) {
    throw Error("topology: distance matrix must have num_nodes rows");
  }
  for (int a = 0; a < num_nodes; ++a) {
    if (static_cast<int>(distance[a].size()) != num_nodes) {
      throw Error("topology: distance matrix must be square");
    }
  }
  for (int a = 0; a < num_nodes; ++a) {
    if (distance[a][a] != 1.0) {
      throw Error("topology: distance[k][k] must be 1.0 (row " + std::to_string(a) + ")");
    }
    for (int b = 0; b < num_nodes; ++b) {
      const double d = distance[a][b];
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw Error("topology: distance entries must be finite and > 0");
      }
      if (d != distance[b][a]) {
        throw Error("topology: distance matrix must be symmetric");
      }
    }
  }
  return Topology(num_nodes, cores_per_node, std::move(distance));
}

NodeId Topology::node_of(CoreId core) const {
  if (!valid_core(core)) {
    throw Error("topology: core " + std::to_string(core.value) + " out of range");
  }
  return NodeId{core.value / cores_per_node_};
}

double Topology::distance(NodeId from, NodeId to) const {
  if (!valid_node(from) || !valid_node(to)) {
    throw Error("topology: node out of range");
  }
  return distance_[from.value][to.value];
}

std::vector<CoreId> Topology::cores_of(NodeId node) const {
  if (!valid_node(node)) throw Error("topology: node out of range");
  std::vector<CoreId> out;
  out.reserve(cores_per_node_);
  for (int c = 0; c < cores_per_node_; ++c) {
    out.emplace_back(node.value * cores_per_node_ + c);
  }
  return out;
}

}  // namespace numamig
