#pragma once

#include <cstdint>
#include <span>

#include "bimod/objective.hpp"

namespace bimod {

struct OptimizerConfig {
  std::uint64_t seed = 1;
  int restarts = 8;
  int max_passes = 64;     // node-move sweeps per level
  double tolerance = 1e-10;  // minimum improvement that counts as progress
  int allow_exhaustive_below = 10;  // exact enumeration for graphs up to this many nodes
};

struct DetectionResult {
  Partition partition;
  ObjectiveValue objective;  // re-evaluated on the final partition
  double chi = 0.0;
  int restarts_used = 0;
  int passes_used = 0;
  bool exact = false;  // set when the result came from exhaustive enumeration
};

/// Maximize the objective at fixed resolution. Runs seeded independent
/// restarts of a two-phase local-move/aggregation search and keeps the best;
/// deterministic for fixed inputs, and the returned partition admits no
/// single-node move improving the objective by more than the tolerance.
/// Graphs at or below allow_exhaustive_below nodes are solved exactly.
/// Each warm start runs as one extra restart on top of the cold ones.
DetectionResult detect(const BipartiteGraph& graph, const Resolution& resolution,
                       const OptimizerConfig& config,
                       std::span<const Partition> warm_starts = {});

/// Global optimum by enumerating every set partition of the node set.
/// Partitions that are invalid under chi < 0 (zero-density community) are
/// skipped. Throws TooLargeError when the graph exceeds max_nodes.
DetectionResult exhaustive_detect(const BipartiteGraph& graph, const Resolution& resolution,
                                  int max_nodes = 10);

}  // namespace bimod
