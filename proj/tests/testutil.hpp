#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bimod/graph.hpp"
#include "bimod/rng.hpp"

namespace bimod::test {

// Random bipartite graph for property tests: node counts in [1, max_side],
// each pair kept with the given probability, weights in (0.1, 5] when
// weighted, 1 otherwise.
inline BipartiteGraph random_graph(SplitMix64& rng, int max_side, double edge_prob,
                                   bool weighted) {
  int reds = 1 + static_cast<int>(rng.below(max_side));
  int blues = 1 + static_cast<int>(rng.below(max_side));
  std::vector<Edge> edges;
  for (int r = 0; r < reds; ++r) {
    for (int b = 0; b < blues; ++b) {
      if (rng.unit() < edge_prob) {
        double w = weighted ? 0.1 + 4.9 * rng.unit() : 1.0;
        edges.push_back({r, b, w});
      }
    }
  }
  return build_graph(reds, blues, std::move(edges));
}

inline Partition random_partition(SplitMix64& rng, int red_count, int blue_count,
                                  int max_communities) {
  std::vector<int> red(red_count), blue(blue_count);
  for (int& c : red) c = static_cast<int>(rng.below(max_communities));
  for (int& c : blue) c = static_cast<int>(rng.below(max_communities));
  return Partition(std::move(red), std::move(blue));
}

}  // namespace bimod::test
