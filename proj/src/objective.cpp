#include "bimod/objective.hpp"

#include <cmath>
#include <string>

#include "bimod/ksum.hpp"

namespace bimod {

namespace detail {

CommunityTerm community_term(double internal, double red_degree, double blue_degree,
                             double pairs, double total_weight, double norm, double chi) {
  double base = (internal - red_degree * blue_degree / total_weight) / total_weight;
  if (chi == 0.0) return {base, false};
  double rho = pairs > 0.0 ? internal / (pairs * norm) : 0.0;
  if (rho == 0.0) return {0.0, chi < 0.0};
  return {base * std::pow(rho, chi), false};
}

}  // namespace detail

double internal_density(const CommunityStats& stats, DensityMode mode, double max_weight) {
  double pairs = static_cast<double>(stats.red_nodes) * stats.blue_nodes;
  if (pairs <= 0.0) return 0.0;
  if (mode == DensityMode::weighted) return stats.internal_weight / (pairs * max_weight);
  return stats.internal_weight / pairs;
}

ObjectiveValue evaluate_qbg(const BipartiteGraph& graph, const Partition& partition,
                            const Resolution& resolution) {
  auto stats = community_stats(graph, partition);
  ObjectiveValue value;
  value.per_community.assign(stats.size(), 0.0);
  double F = graph.total_weight();
  if (F == 0.0) return value;

  double norm = detail::density_norm(graph, resolution.density_mode);
  KahanSum total;
  for (std::size_t c = 0; c < stats.size(); ++c) {
    const CommunityStats& s = stats[c];
    double pairs = static_cast<double>(s.red_nodes) * s.blue_nodes;
    auto term = detail::community_term(s.internal_weight, s.red_degree, s.blue_degree,
                                       pairs, F, norm, resolution.chi);
    if (term.degenerate) {
      throw DegenerateDensityError("community " + std::to_string(c) +
                                   " has zero internal density with chi < 0");
    }
    value.per_community[c] = term.value;
    total.add(term.value);
  }
  value.total = total.value();
  return value;
}

ObjectiveValue evaluate_qb(const BipartiteGraph& graph, const Partition& partition) {
  return evaluate_qbg(graph, partition, Resolution{0.0, DensityMode::unweighted});
}

double move_delta(const BipartiteGraph& graph, const Partition& partition,
                  const std::vector<CommunityStats>& stats, NodeRef node,
                  int target_community, const Resolution& resolution) {
  int count = partition.num_communities();
  if (static_cast<int>(stats.size()) != count) {
    throw PartitionMismatchError("stats cache does not match partition");
  }
  int limit = node.node_class == NodeClass::red ? graph.red_count() : graph.blue_count();
  if (node.index < 0 || node.index >= limit) {
    throw OutOfBoundsError("node index " + std::to_string(node.index));
  }
  if (target_community < 0 || target_community > count) {
    throw OutOfBoundsError("target community " + std::to_string(target_community));
  }

  int source = partition.community_of(node);
  if (target_community == source) return 0.0;
  double F = graph.total_weight();
  if (F == 0.0) return 0.0;

  // edge weight from the node into the source and target communities
  double to_source = 0.0, to_target = 0.0;
  for (auto [other, w] : graph.neighbors(node)) {
    NodeRef neighbor{node.node_class == NodeClass::red ? NodeClass::blue : NodeClass::red,
                     other};
    int c = partition.community_of(neighbor);
    if (c == source) to_source += w;
    if (c == target_community) to_target += w;
  }

  double strength = graph.strength(node);
  bool is_red = node.node_class == NodeClass::red;
  double norm = detail::density_norm(graph, resolution.density_mode);
  bool degenerate = false;
  auto term = [&](double m, double q, double d, int nr, int nb) {
    if (nr + nb == 0) return 0.0;
    auto t = detail::community_term(m, q, d, static_cast<double>(nr) * nb, F, norm,
                                    resolution.chi);
    degenerate |= t.degenerate;
    return t.value;
  };

  const CommunityStats& src = stats[source];
  double before = term(src.internal_weight, src.red_degree, src.blue_degree,
                       src.red_nodes, src.blue_nodes);
  double after = term(src.internal_weight - to_source,
                      src.red_degree - (is_red ? strength : 0.0),
                      src.blue_degree - (is_red ? 0.0 : strength),
                      src.red_nodes - (is_red ? 1 : 0), src.blue_nodes - (is_red ? 0 : 1));

  CommunityStats dst;  // fresh community when target_community == count
  if (target_community < count) dst = stats[target_community];
  before += term(dst.internal_weight, dst.red_degree, dst.blue_degree, dst.red_nodes,
                 dst.blue_nodes);
  after += term(dst.internal_weight + to_target,
                dst.red_degree + (is_red ? strength : 0.0),
                dst.blue_degree + (is_red ? 0.0 : strength),
                dst.red_nodes + (is_red ? 1 : 0), dst.blue_nodes + (is_red ? 0 : 1));

  if (degenerate) {
    throw DegenerateDensityError("move creates a zero-density community with chi < 0");
  }
  return after - before;
}

}  // namespace bimod
