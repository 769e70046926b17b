#include "bimod/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "bimod/ksum.hpp"

namespace bimod {

BipartiteGraph::BipartiteGraph(int red_count, int blue_count, std::vector<Edge> edges)
    : red_count_(red_count), blue_count_(blue_count), edges_(std::move(edges)) {
  if (red_count_ < 0 || blue_count_ < 0) {
    throw OutOfBoundsError("node counts must be nonnegative");
  }
  red_strengths_.assign(red_count_, 0.0);
  blue_strengths_.assign(blue_count_, 0.0);
  red_adj_.resize(red_count_);
  blue_adj_.resize(blue_count_);

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size());
  KahanSum total;
  std::vector<KahanSum> red_sum(red_count_), blue_sum(blue_count_);
  for (const Edge& e : edges_) {
    if (e.red < 0 || e.red >= red_count_ || e.blue < 0 || e.blue >= blue_count_) {
      throw OutOfBoundsError("edge (" + std::to_string(e.red) + ", " +
                             std::to_string(e.blue) + ") outside node ranges");
    }
    if (!(e.weight > 0.0)) {
      throw NonPositiveWeightError("edge (" + std::to_string(e.red) + ", " +
                                   std::to_string(e.blue) + ") has non-positive weight");
    }
    std::uint64_t key =
        (static_cast<std::uint64_t>(e.red) << 32) | static_cast<std::uint32_t>(e.blue);
    if (!seen.insert(key).second) {
      throw DuplicateEdgeError("parallel edge (" + std::to_string(e.red) + ", " +
                               std::to_string(e.blue) + ")");
    }
    total.add(e.weight);
    red_sum[e.red].add(e.weight);
    blue_sum[e.blue].add(e.weight);
    max_weight_ = std::max(max_weight_, e.weight);
    if (e.weight != 1.0) has_non_unit_weight_ = true;
    red_adj_[e.red].emplace_back(e.blue, e.weight);
    blue_adj_[e.blue].emplace_back(e.red, e.weight);
  }
  total_weight_ = total.value();
  for (int r = 0; r < red_count_; ++r) red_strengths_[r] = red_sum[r].value();
  for (int b = 0; b < blue_count_; ++b) blue_strengths_[b] = blue_sum[b].value();
}

BipartiteGraph build_graph(int red_count, int blue_count, std::vector<Edge> edges) {
  return BipartiteGraph(red_count, blue_count, std::move(edges));
}

Partition::Partition(std::vector<int> red_assignment, std::vector<int> blue_assignment)
    : red_(std::move(red_assignment)), blue_(std::move(blue_assignment)) {
  for (int c : red_) {
    if (c < 0) throw PartitionMismatchError("negative community id");
  }
  for (int c : blue_) {
    if (c < 0) throw PartitionMismatchError("negative community id");
  }
  normalize();
}

Partition Partition::singletons(int red_count, int blue_count) {
  std::vector<int> red(red_count), blue(blue_count);
  for (int r = 0; r < red_count; ++r) red[r] = r;
  for (int b = 0; b < blue_count; ++b) blue[b] = red_count + b;
  return Partition(std::move(red), std::move(blue));
}

Partition Partition::single_community(int red_count, int blue_count) {
  return Partition(std::vector<int>(red_count, 0), std::vector<int>(blue_count, 0));
}

void Partition::normalize() {
  int max_id = -1;
  for (int c : red_) max_id = std::max(max_id, c);
  for (int c : blue_) max_id = std::max(max_id, c);
  std::vector<int> remap(static_cast<std::size_t>(max_id) + 1, -1);
  int next = 0;
  auto relabel = [&](std::vector<int>& assignment) {
    for (int& c : assignment) {
      if (remap[c] == -1) remap[c] = next++;
      c = remap[c];
    }
  };
  relabel(red_);
  relabel(blue_);
  num_communities_ = next;
}

std::vector<CommunityStats> community_stats(const BipartiteGraph& graph,
                                            const Partition& partition) {
  if (partition.red_count() != graph.red_count() ||
      partition.blue_count() != graph.blue_count()) {
    throw PartitionMismatchError("partition covers " +
                                 std::to_string(partition.red_count()) + "+" +
                                 std::to_string(partition.blue_count()) +
                                 " nodes, graph has " + std::to_string(graph.red_count()) +
                                 "+" + std::to_string(graph.blue_count()));
  }
  int count = partition.num_communities();
  std::vector<CommunityStats> stats(count);
  std::vector<KahanSum> internal(count), red_deg(count), blue_deg(count);
  for (int r = 0; r < graph.red_count(); ++r) {
    int c = partition.red_community(r);
    stats[c].red_nodes += 1;
    red_deg[c].add(graph.red_strength(r));
  }
  for (int b = 0; b < graph.blue_count(); ++b) {
    int c = partition.blue_community(b);
    stats[c].blue_nodes += 1;
    blue_deg[c].add(graph.blue_strength(b));
  }
  for (const Edge& e : graph.edges()) {
    int cr = partition.red_community(e.red);
    if (cr == partition.blue_community(e.blue)) internal[cr].add(e.weight);
  }
  for (int c = 0; c < count; ++c) {
    stats[c].internal_weight = internal[c].value();
    stats[c].red_degree = red_deg[c].value();
    stats[c].blue_degree = blue_deg[c].value();
    double pairs = static_cast<double>(stats[c].red_nodes) * stats[c].blue_nodes;
    stats[c].density = pairs > 0.0 ? stats[c].internal_weight / pairs : 0.0;
  }
  return stats;
}

}  // namespace bimod
