#pragma once

#include <vector>

#include "bimod/graph.hpp"

namespace bimod {

// Density convention for rho. "unweighted" divides internal weight by the
// number of red-blue pairs; "weighted" additionally divides by the graph's
// maximum edge weight, so rho stays in [0, 1] for graphs whose per-pair
// weight never exceeds the maximum single weight.
enum class DensityMode { unweighted, weighted };

struct Resolution {
  double chi = 0.0;
  DensityMode density_mode = DensityMode::unweighted;

  /// Default convention: weighted whenever the graph carries a non-unit
  /// weight, unweighted otherwise.
  static Resolution for_graph(const BipartiteGraph& graph, double chi) {
    return {chi, graph.has_non_unit_weight() ? DensityMode::weighted
                                             : DensityMode::unweighted};
  }
};

struct ObjectiveValue {
  double total = 0.0;
  std::vector<double> per_community;  // indexed by community id; sums to total
};

/// Internal link density of one co-cluster under the given convention.
/// Returns 0 when the co-cluster has no red-blue pairs. max_weight must be
/// positive in weighted mode.
double internal_density(const CommunityStats& stats, DensityMode mode, double max_weight);

/// Plain bipartite modularity. Edgeless graphs evaluate to 0.
ObjectiveValue evaluate_qb(const BipartiteGraph& graph, const Partition& partition);

/// Density-weighted bipartite modularity: each community term is scaled by
/// rho^chi, with 0^0 = 1 so that chi = 0 reduces exactly to evaluate_qb.
/// Throws DegenerateDensityError when chi < 0 and some community has rho = 0.
ObjectiveValue evaluate_qbg(const BipartiteGraph& graph, const Partition& partition,
                            const Resolution& resolution);

/// Objective change for moving one node into target_community (or into a
/// fresh community via target_community == stats.size()), derived from the
/// two affected communities only. stats must describe partition. Moving a
/// node onto its own community returns 0.
double move_delta(const BipartiteGraph& graph, const Partition& partition,
                  const std::vector<CommunityStats>& stats, NodeRef node,
                  int target_community, const Resolution& resolution);

namespace detail {

inline double density_norm(const BipartiteGraph& graph, DensityMode mode) {
  return mode == DensityMode::weighted ? graph.max_weight() : 1.0;
}

struct CommunityTerm {
  double value = 0.0;
  bool degenerate = false;  // rho = 0 met with chi < 0
};

/// One community's contribution (m - q * d / F) * rho^chi / F under the
/// rho = 0 and 0^0 = 1 conventions. pairs = red_nodes * blue_nodes.
CommunityTerm community_term(double internal, double red_degree, double blue_degree,
                             double pairs, double total_weight, double norm, double chi);

}  // namespace detail

}  // namespace bimod
