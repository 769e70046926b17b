#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bimod/errors.hpp"

namespace bimod {

enum class NodeClass : unsigned char { red, blue };

// Node identity used throughout the toolkit: (class, dense index).
struct NodeRef {
  NodeClass node_class = NodeClass::red;
  int index = 0;
};

struct Edge {
  int red = 0;
  int blue = 0;
  double weight = 1.0;
};

/// Immutable weighted bipartite graph. Every edge connects a red node to a
/// blue node; parallel edges and non-positive weights are rejected at
/// construction. Safe to share across threads once built.
class BipartiteGraph {
 public:
  BipartiteGraph(int red_count, int blue_count, std::vector<Edge> edges);

  int red_count() const { return red_count_; }
  int blue_count() const { return blue_count_; }
  int node_count() const { return red_count_ + blue_count_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Sum of all edge weights. 0 for an edgeless graph.
  double total_weight() const { return total_weight_; }
  /// Largest single edge weight. 0 for an edgeless graph.
  double max_weight() const { return max_weight_; }
  /// True when some edge weight differs from 1.
  bool has_non_unit_weight() const { return has_non_unit_weight_; }

  double red_strength(int red) const { return red_strengths_[red]; }
  double blue_strength(int blue) const { return blue_strengths_[blue]; }
  double strength(NodeRef node) const {
    return node.node_class == NodeClass::red ? red_strengths_[node.index]
                                             : blue_strengths_[node.index];
  }
  const std::vector<double>& red_strengths() const { return red_strengths_; }
  const std::vector<double>& blue_strengths() const { return blue_strengths_; }

  /// Neighbors of a red node as (blue index, weight) pairs.
  std::span<const std::pair<int, double>> red_neighbors(int red) const {
    return red_adj_[red];
  }
  /// Neighbors of a blue node as (red index, weight) pairs.
  std::span<const std::pair<int, double>> blue_neighbors(int blue) const {
    return blue_adj_[blue];
  }
  std::span<const std::pair<int, double>> neighbors(NodeRef node) const {
    return node.node_class == NodeClass::red ? red_neighbors(node.index)
                                             : blue_neighbors(node.index);
  }

 private:
  int red_count_ = 0;
  int blue_count_ = 0;
  std::vector<Edge> edges_;
  double total_weight_ = 0.0;
  double max_weight_ = 0.0;
  bool has_non_unit_weight_ = false;
  std::vector<double> red_strengths_;
  std::vector<double> blue_strengths_;
  std::vector<std::vector<std::pair<int, double>>> red_adj_;
  std::vector<std::vector<std::pair<int, double>>> blue_adj_;
};

/// Validating constructor wrapper; throws OutOfBoundsError, DuplicateEdgeError
/// or NonPositiveWeightError on bad input.
BipartiteGraph build_graph(int red_count, int blue_count, std::vector<Edge> edges);

/// Assignment of every node of both classes to a co-cluster id. Ids are
/// normalized to first-occurrence order (red nodes scanned before blue), so
/// they are always contiguous in [0, num_communities()) with no empty ids,
/// and two partitions are equal up to relabeling iff their normalized
/// assignments compare equal.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<int> red_assignment, std::vector<int> blue_assignment);

  static Partition singletons(int red_count, int blue_count);
  static Partition single_community(int red_count, int blue_count);

  int red_community(int red) const { return red_[red]; }
  int blue_community(int blue) const { return blue_[blue]; }
  int community_of(NodeRef node) const {
    return node.node_class == NodeClass::red ? red_[node.index] : blue_[node.index];
  }

  int red_count() const { return static_cast<int>(red_.size()); }
  int blue_count() const { return static_cast<int>(blue_.size()); }
  int node_count() const { return red_count() + blue_count(); }
  int num_communities() const { return num_communities_; }

  const std::vector<int>& red_assignment() const { return red_; }
  const std::vector<int>& blue_assignment() const { return blue_; }

  bool operator==(const Partition& other) const = default;

 private:
  void normalize();

  std::vector<int> red_;
  std::vector<int> blue_;
  int num_communities_ = 0;
};

/// Per-co-cluster aggregates for one partition of one graph.
struct CommunityStats {
  double internal_weight = 0.0;  // total weight of edges inside the co-cluster
  double red_degree = 0.0;       // summed weighted degree of its red nodes
  double blue_degree = 0.0;      // summed weighted degree of its blue nodes
  int red_nodes = 0;
  int blue_nodes = 0;
  double density = 0.0;  // internal_weight / (red_nodes * blue_nodes), 0 when no pairs
};

/// One record per co-cluster id. Throws PartitionMismatchError when the
/// partition does not cover exactly the graph's nodes.
std::vector<CommunityStats> community_stats(const BipartiteGraph& graph,
                                            const Partition& partition);

}  // namespace bimod
