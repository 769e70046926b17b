#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bimod/analytic.hpp"
#include "bimod/graph.hpp"

namespace bimod {

/// Ring of `cliques` complete K_{k,k} unit-weight cliques. Adjacent cliques
/// are joined by a single unit link placed so that every clique has exactly
/// one red and one blue ring endpoint.
struct RingSpec {
  int cliques = 3;     // n, at least 3
  int clique_size = 1;  // k, at least 1
};

struct RingNetwork {
  BipartiteGraph graph;
  Partition split;  // one community per clique

  /// Adjacent-pairs partition; requires an even clique count.
  const Partition& merged_partition() const;

  std::optional<Partition> merged;
};

RingNetwork gen_ring(const RingSpec& spec);

/// Two complete bipartite cliques weakly coupled to an arbitrary external
/// component. Link totals are realized exactly; non-integer totals get one
/// fractional-weight link.
struct BenchmarkSpec {
  int red1 = 1, blue1 = 1;  // clique 1 sides
  int red2 = 1, blue2 = 1;  // clique 2 sides; requires red2*blue2 >= red1*blue1
  double inter_weight = 0.0;       // total weight linking the two cliques
  double clique1_external = 0.0;   // total weight linking clique 1 to the external part
  double clique2_external = 0.0;   // same for clique 2
  double external_weight = 0.0;    // internal weight of the external component
  int external_nodes = -1;         // -1: smallest count able to hold external_weight
  double weak_coupling_cap = 0.05; // max clique-external total as a fraction of clique pairs
};

struct BenchmarkNetwork {
  BipartiteGraph graph;
  Partition split;   // clique 1 | clique 2 | external
  Partition merged;  // clique 1 + clique 2 | external
  int external_red = 0;
  int external_blue = 0;
};

BenchmarkNetwork gen_benchmark(const BenchmarkSpec& spec, std::uint64_t seed);

/// Nondimensional coordinates (p, d, t, r) of a benchmark spec.
NondimParams nondim_coordinates(const BenchmarkSpec& spec);

/// Nested hierarchy of bipartite cliques. Level-1 blocks are complete
/// K_{base_red, base_blue} with weight level_weights[0]; at level k the
/// `branching` level-(k-1) blocks are fully interconnected across all
/// red-blue pairs with weight level_weights[k-1]. Weights must decrease
/// strictly up the hierarchy.
struct HierarchySpec {
  int levels = 1;
  int base_red = 3;
  int base_blue = 3;
  int branching = 5;
  std::vector<double> level_weights;  // one per level, strictly decreasing, positive
};

struct HierarchyNetwork {
  BipartiteGraph graph;
  /// level_partitions[j] groups nodes by their level-(j+1) ancestor block,
  /// so [0] is the finest (one community per level-1 clique) and the last
  /// entry puts the whole network in one community.
  std::vector<Partition> level_partitions;
};

HierarchyNetwork gen_hierarchy(const HierarchySpec& spec);

}  // namespace bimod
