#pragma once

#include <vector>

#include "numamig/ids.hpp"

namespace numamig {

/// A NUMA machine: `num_nodes` nodes of `cores_per_node` cores each, one
/// memory cell per node, and a symmetric matrix of latency factors where
/// local access is 1.0. Cores are numbered contiguously per node.
///
/// Immutable once built; share freely across readers.
class Topology {
 public:
  using Matrix = std::vector<std::vector<double>>;

  /// Uniform machine: 1.0 on the diagonal, `remote_factor` elsewhere.
  static Topology uniform(int num_nodes, int cores_per_node, double remote_factor);

  /// Explicit distance matrix, validated (unit diagonal, symmetric, positive).
  static Topology with_matrix(int num_nodes, int cores_per_node, Matrix distance);

  int num_nodes() const { return num_nodes_; }
  int cores_per_node() const { return cores_per_node_; }
  int num_cores() const { return num_nodes_ * cores_per_node_; }

  NodeId node_of(CoreId core) const;
  double distance(NodeId from, NodeId to) const;
  const Matrix& distance_matrix() const { return distance_; }

  /// Cores of `node` in ascending order.
  std::vector<CoreId> cores_of(NodeId node) const;

  bool valid_core(CoreId core) const {
    return core.value >= 0 && core.value < num_cores();
  }
  bool valid_node(NodeId node) const {
    return node.value >= 0 && node.value < num_nodes_;
  }

 private:
  Topology(int num_nodes, int cores_per_node, Matrix distance);

  int num_nodes_;
  int cores_per_node_;
  Matrix distance_;
};

}  // namespace numamig
