#include "bimod/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bimod/rng.hpp"

namespace bimod {

namespace {

// ============================================================================
// Level graph: supernodes carrying the original node counts, degrees, and
// internal weight. rho of a community depends on original node counts, so the
// collapsed adjacency alone would not be enough.
// ============================================================================

struct LevelNode {
  int red_nodes = 0;
  int blue_nodes = 0;
  double red_degree = 0.0;
  double blue_degree = 0.0;
  double internal = 0.0;   // weight of original edges fully inside this supernode
  int internal_links = 0;  // bundle count behind `internal`; weights are positive,
                           // so internal > 0 exactly when internal_links > 0
};

struct LevelGraph {
  std::vector<LevelNode> nodes;
  std::vector<std::vector<std::pair<int, double>>> adj;  // symmetric crossing weights

  int size() const { return static_cast<int>(nodes.size()); }
};

LevelGraph make_base_level(const BipartiteGraph& graph) {
  LevelGraph level;
  int reds = graph.red_count(), blues = graph.blue_count();
  level.nodes.resize(reds + blues);
  level.adj.resize(reds + blues);
  for (int r = 0; r < reds; ++r) {
    level.nodes[r].red_nodes = 1;
    level.nodes[r].red_degree = graph.red_strength(r);
  }
  for (int b = 0; b < blues; ++b) {
    level.nodes[reds + b].blue_nodes = 1;
    level.nodes[reds + b].blue_degree = graph.blue_strength(b);
  }
  for (const Edge& e : graph.edges()) {
    level.adj[e.red].emplace_back(reds + e.blue, e.weight);
    level.adj[reds + e.blue].emplace_back(e.red, e.weight);
  }
  return level;
}

int compact_labels(std::vector<int>& labels) {
  int max_id = -1;
  for (int c : labels) max_id = std::max(max_id, c);
  std::vector<int> remap(static_cast<std::size_t>(max_id) + 1, -1);
  int next = 0;
  for (int c : labels) {
    if (remap[c] == -1) remap[c] = next++;
  }
  for (int& c : labels) c = remap[c];
  return next;
}

LevelGraph aggregate(const LevelGraph& level, const std::vector<int>& labels, int count) {
  LevelGraph out;
  out.nodes.resize(count);
  out.adj.resize(count);
  for (int v = 0; v < level.size(); ++v) {
    const LevelNode& node = level.nodes[v];
    LevelNode& super = out.nodes[labels[v]];
    super.red_nodes += node.red_nodes;
    super.blue_nodes += node.blue_nodes;
    super.red_degree += node.red_degree;
    super.blue_degree += node.blue_degree;
    super.internal += node.internal;
    super.internal_links += node.internal_links;
  }
  std::vector<std::map<int, double>> cross(count);
  for (int v = 0; v < level.size(); ++v) {
    for (auto [u, w] : level.adj[v]) {
      if (v >= u) continue;  // each undirected pair once
      int cv = labels[v], cu = labels[u];
      if (cv == cu) {
        out.nodes[cv].internal += w;
        out.nodes[cv].internal_links += 1;
      } else {
        cross[std::min(cv, cu)][std::max(cv, cu)] += w;
      }
    }
  }
  for (int c = 0; c < count; ++c) {
    for (auto [u, w] : cross[c]) {
      out.adj[c].emplace_back(u, w);
      out.adj[u].emplace_back(c, w);
    }
  }
  return out;
}

// ============================================================================
// Local-move phase over one level graph
// ============================================================================

struct CommunityAgg {
  double internal = 0.0;
  double red_degree = 0.0;
  double blue_degree = 0.0;
  int red_nodes = 0;
  int blue_nodes = 0;
  int members = 0;
  int internal_links = 0;  // exact emptiness marker for the chi < 0 legality rule
};

class LocalMover {
 public:
  LocalMover(const LevelGraph& level, double total_weight, double norm, double chi,
             double tolerance)
      : level_(level), F_(total_weight), norm_(norm), chi_(chi), tolerance_(tolerance) {}

  // Sweeps seeded-random single-supernode moves until a full pass makes no
  // move or max_passes is hit. labels must be compact on entry and are
  // compact on exit. Returns the number of passes run.
  int run(std::vector<int>& labels, SplitMix64& rng, int max_passes) {
    const int n = level_.size();
    moved_any_ = false;
    int count = labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
    rebuild(labels, count);
    link_.assign(static_cast<std::size_t>(2 * n + 2), 0.0);
    link_count_.assign(static_cast<std::size_t>(2 * n + 2), 0);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    int passes = 0;
    while (passes < max_passes) {
      ++passes;
      rng.shuffle(order);
      int moved = 0;
      for (int v : order) moved += try_move(v, labels) ? 1 : 0;
      if (moved == 0) break;
      moved_any_ = true;
      // drop emptied ids so fresh detachments cannot grow the id space
      int compacted = compact_labels(labels);
      rebuild(labels, compacted);
    }
    return passes;
  }

  bool moved_any() const { return moved_any_; }

 private:
  void add_member(CommunityAgg& c, int v, double link_weight, int link_count) {
    const LevelNode& node = level_.nodes[v];
    c.internal += node.internal + link_weight;
    c.internal_links += node.internal_links + link_count;
    c.red_degree += node.red_degree;
    c.blue_degree += node.blue_degree;
    c.red_nodes += node.red_nodes;
    c.blue_nodes += node.blue_nodes;
    c.members += 1;
  }

  void remove_member(CommunityAgg& c, int v, double link_weight, int link_count) {
    const LevelNode& node = level_.nodes[v];
    c.internal -= node.internal + link_weight;
    c.internal_links -= node.internal_links + link_count;
    c.red_degree -= node.red_degree;
    c.blue_degree -= node.blue_degree;
    c.red_nodes -= node.red_nodes;
    c.blue_nodes -= node.blue_nodes;
    c.members -= 1;
  }

  void rebuild(const std::vector<int>& labels, int count) {
    comms_.assign(count, CommunityAgg{});
    for (int v = 0; v < level_.size(); ++v) add_member(comms_[labels[v]], v, 0.0, 0);
    for (int v = 0; v < level_.size(); ++v) {
      for (auto [u, w] : level_.adj[v]) {
        if (v < u && labels[v] == labels[u]) {
          comms_[labels[v]].internal += w;
          comms_[labels[v]].internal_links += 1;
        }
      }
    }
  }

  double contribution(const CommunityAgg& c) const {
    if (c.members == 0) return 0.0;
    double base = (c.internal - c.red_degree * c.blue_degree / F_) / F_;
    if (chi_ == 0.0) return base;
    double pairs = static_cast<double>(c.red_nodes) * c.blue_nodes;
    double rho = pairs > 0.0 ? c.internal / (pairs * norm_) : 0.0;
    if (rho == 0.0) return 0.0;  // chi < 0 never reaches this state
    return base * std::pow(rho, chi_);
  }

  // chi < 0 requires every nonempty community to keep positive internal weight
  bool legal(const CommunityAgg& c) const {
    return c.members == 0 || c.internal_links > 0;
  }

  bool try_move(int v, std::vector<int>& labels) {
    int source = labels[v];
    touched_.clear();
    for (auto [u, w] : level_.adj[v]) {
      int c = labels[u];
      if (link_count_[c] == 0) touched_.push_back(c);
      link_[c] += w;
      link_count_[c] += 1;
    }
    std::sort(touched_.begin(), touched_.end());

    const LevelNode& node = level_.nodes[v];
    CommunityAgg source_after = comms_[source];
    remove_member(source_after, v, link_[source], link_count_[source]);
    bool source_ok = chi_ >= 0.0 || legal(source_after);

    double best_delta = tolerance_;
    int best_target = -1;
    if (source_ok) {
      double before_source = contribution(comms_[source]);
      double after_source = contribution(source_after);
      auto consider_target = [&](int c) {
        if (c == source || comms_[c].members == 0) return;
        CommunityAgg target_after = comms_[c];
        add_member(target_after, v, link_[c], link_count_[c]);
        double delta = (after_source + contribution(target_after)) -
                       (before_source + contribution(comms_[c]));
        if (delta > best_delta) {
          best_delta = delta;
          best_target = c;
        }
      };
      if (chi_ < 0.0 || touched_.empty()) {
        // density couples every community to every node through its node
        // counts, so neighbor pruning can hide the optimum under chi < 0;
        // neighborless nodes have no pruned candidates at all
        for (int c = 0; c < static_cast<int>(comms_.size()); ++c) consider_target(c);
      } else {
        for (int c : touched_) consider_target(c);
      }
      // detachment into a fresh community; under chi < 0 only when the
      // detached supernode keeps internal links of its own
      if (comms_[source].members > 1 && (chi_ >= 0.0 || node.internal_links > 0)) {
        CommunityAgg fresh{};
        add_member(fresh, v, 0.0, 0);
        double delta = (after_source + contribution(fresh)) - before_source;
        if (delta > best_delta) {
          best_delta = delta;
          best_target = static_cast<int>(comms_.size());
        }
      }
    }

    bool moved = best_target >= 0;
    if (moved) {
      remove_member(comms_[source], v, link_[source], link_count_[source]);
      if (best_target == static_cast<int>(comms_.size())) {
        comms_.emplace_back();
        add_member(comms_.back(), v, 0.0, 0);
      } else {
        add_member(comms_[best_target], v, link_[best_target], link_count_[best_target]);
      }
      labels[v] = best_target;
    }
    for (int c : touched_) {
      link_[c] = 0.0;
      link_count_[c] = 0;
    }
    return moved;
  }

  const LevelGraph& level_;
  double F_;
  double norm_;
  double chi_;
  double tolerance_;
  bool moved_any_ = false;
  std::vector<CommunityAgg> comms_;
  std::vector<double> link_;
  std::vector<int> link_count_;
  std::vector<int> touched_;
};

// ============================================================================
// One restart: local moves at node granularity, then aggregation levels,
// repeated from the flat partition until nothing improves anywhere.
// ============================================================================

struct RestartOutcome {
  std::vector<int> flat;
  int passes = 0;
};

RestartOutcome run_restart(const LevelGraph& base, std::vector<int> flat,
                           double total_weight, double norm, double chi,
                           const OptimizerConfig& config, SplitMix64& rng) {
  RestartOutcome out;
  const int n = base.size();
  const int cycle_cap = 64;
  for (int cycle = 0; cycle < cycle_cap; ++cycle) {
    bool improved = false;
    compact_labels(flat);
    LocalMover node_mover(base, total_weight, norm, chi, config.tolerance);
    out.passes += node_mover.run(flat, rng, config.max_passes);
    improved |= node_mover.moved_any();

    int count = compact_labels(flat);
    std::vector<int> membership = flat;  // original node -> current supernode
    LevelGraph level = aggregate(base, flat, count);
    while (level.size() > 1) {
      std::vector<int> level_labels(level.size());
      std::iota(level_labels.begin(), level_labels.end(), 0);
      LocalMover mover(level, total_weight, norm, chi, config.tolerance);
      out.passes += mover.run(level_labels, rng, config.max_passes);
      if (!mover.moved_any()) break;
      improved = true;
      int next_count = compact_labels(level_labels);
      for (int i = 0; i < n; ++i) membership[i] = level_labels[membership[i]];
      level = aggregate(level, level_labels, next_count);
    }
    flat = std::move(membership);
    if (!improved) break;
  }
  compact_labels(flat);
  out.flat = std::move(flat);
  return out;
}

Partition partition_from_flat(const BipartiteGraph& graph, const std::vector<int>& flat) {
  std::vector<int> red(flat.begin(), flat.begin() + graph.red_count());
  std::vector<int> blue(flat.begin() + graph.red_count(), flat.end());
  return Partition(std::move(red), std::move(blue));
}

std::vector<int> flat_from_partition(const BipartiteGraph& graph, const Partition& p) {
  std::vector<int> flat;
  flat.reserve(graph.node_count());
  flat.insert(flat.end(), p.red_assignment().begin(), p.red_assignment().end());
  flat.insert(flat.end(), p.blue_assignment().begin(), p.blue_assignment().end());
  return flat;
}

std::vector<int> component_labels(const LevelGraph& base) {
  std::vector<int> parent(base.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int v = 0; v < base.size(); ++v) {
    for (auto [u, w] : base.adj[v]) {
      int a = find(v), b = find(u);
      if (a != b) parent[a] = b;
    }
  }
  std::vector<int> labels(base.size());
  for (int v = 0; v < base.size(); ++v) labels[v] = find(v);
  compact_labels(labels);
  return labels;
}

// Merges every community without internal links into the heaviest one so a
// chi < 0 run never starts from a zero-density community. When no community
// carries a link at all (a legitimate chi = 0 outcome made of singletons),
// falls back to connected components first.
void repair_for_negative_chi(const LevelGraph& base, std::vector<int>& flat) {
  for (int round = 0; round < 2; ++round) {
    int count = compact_labels(flat);
    std::vector<double> internal(count, 0.0);
    std::vector<int> links(count, 0);
    for (int v = 0; v < base.size(); ++v) {
      internal[flat[v]] += base.nodes[v].internal;
      links[flat[v]] += base.nodes[v].internal_links;
    }
    for (int v = 0; v < base.size(); ++v) {
      for (auto [u, w] : base.adj[v]) {
        if (v < u && flat[v] == flat[u]) {
          internal[flat[v]] += w;
          links[flat[v]] += 1;
        }
      }
    }
    int heaviest = 0;
    for (int c = 1; c < count; ++c) {
      if (internal[c] > internal[heaviest]) heaviest = c;
    }
    if (links[heaviest] > 0) {
      for (int& c : flat) {
        if (links[c] == 0) c = heaviest;
      }
      compact_labels(flat);
      return;
    }
    // no community holds an edge; regroup by connected components and retry
    flat = component_labels(base);
  }
  // reaching here means the graph itself has no edges; leave flat as-is
}

}  // namespace

DetectionResult exhaustive_detect(const BipartiteGraph& graph, const Resolution& resolution,
                                  int max_nodes) {
  int n = graph.node_count();
  if (n > max_nodes) {
    throw TooLargeError("exhaustive enumeration limited to " + std::to_string(max_nodes) +
                        " nodes, graph has " + std::to_string(n));
  }
  DetectionResult best;
  best.chi = resolution.chi;
  best.exact = true;
  if (n == 0) {
    best.partition = Partition({}, {});
    return best;
  }

  // restricted-growth enumeration of all set partitions
  std::vector<int> labels(n, 0), prefix_max(n, 0);
  bool have_best = false;
  while (true) {
    std::vector<int> red(labels.begin(), labels.begin() + graph.red_count());
    std::vector<int> blue(labels.begin() + graph.red_count(), labels.end());
    Partition candidate(std::move(red), std::move(blue));
    bool valid = true;
    ObjectiveValue value;
    try {
      value = evaluate_qbg(graph, candidate, resolution);
    } catch (const DegenerateDensityError&) {
      valid = false;
    }
    if (valid && (!have_best || value.total > best.objective.total)) {
      have_best = true;
      best.partition = std::move(candidate);
      best.objective = std::move(value);
    }
    // next restricted-growth string
    int i = n - 1;
    while (i > 0 && labels[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    labels[i] += 1;
    prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
    for (int j = i + 1; j < n; ++j) {
      labels[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
  if (!have_best) {
    throw DegenerateDensityError("no partition avoids zero-density communities");
  }
  return best;
}

DetectionResult detect(const BipartiteGraph& graph, const Resolution& resolution,
                       const OptimizerConfig& config, std::span<const Partition> warm_starts) {
  if (config.restarts < 1) throw Error("optimizer needs at least one restart");
  if (!(config.tolerance > 0.0)) throw Error("optimizer tolerance must be positive");

  if (graph.node_count() <= config.allow_exhaustive_below) {
    return exhaustive_detect(graph, resolution, config.allow_exhaustive_below);
  }

  DetectionResult result;
  result.chi = resolution.chi;
  if (graph.total_weight() == 0.0) {
    result.partition = Partition::single_community(graph.red_count(), graph.blue_count());
    result.objective = evaluate_qbg(graph, result.partition, resolution);
    result.restarts_used = 0;
    return result;
  }

  LevelGraph base = make_base_level(graph);
  double norm = detail::density_norm(graph, resolution.density_mode);
  const int n = base.size();

  auto initial_flat = [&](SplitMix64& rng) {
    std::vector<int> flat(n);
    std::iota(flat.begin(), flat.end(), 0);
    if (resolution.chi < 0.0) {
      // no legal detachment exists from singletons under chi < 0, so seed
      // from a chi = 0 optimization and repair any zero-density community
      auto warm = run_restart(base, flat, graph.total_weight(), norm, 0.0, config, rng);
      flat = std::move(warm.flat);
      repair_for_negative_chi(base, flat);
    }
    return flat;
  };

  bool have_best = false;
  auto consider = [&](std::vector<int> flat, int passes, int restarts_done) {
    Partition candidate = partition_from_flat(graph, flat);
    ObjectiveValue value = evaluate_qbg(graph, candidate, resolution);
    if (!have_best || value.total > result.objective.total) {
      have_best = true;
      result.partition = std::move(candidate);
      result.objective = std::move(value);
      result.passes_used = passes;
    }
    result.restarts_used = restarts_done;
  };

  for (int restart = 0; restart < config.restarts; ++restart) {
    SplitMix64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(restart)));
    auto outcome = run_restart(base, initial_flat(rng), graph.total_weight(), norm,
                               resolution.chi, config, rng);
    consider(std::move(outcome.flat), outcome.passes, restart + 1);
  }
  int extra = 0;
  for (const Partition& warm : warm_starts) {
    if (warm.red_count() != graph.red_count() || warm.blue_count() != graph.blue_count()) {
      throw PartitionMismatchError("warm start does not cover the graph");
    }
    SplitMix64 rng(derive_seed(config.seed, 0x77a7u + static_cast<std::uint64_t>(extra)));
    std::vector<int> flat = flat_from_partition(graph, warm);
    if (resolution.chi < 0.0) repair_for_negative_chi(base, flat);
    auto outcome = run_restart(base, std::move(flat), graph.total_weight(), norm,
                               resolution.chi, config, rng);
    ++extra;
    consider(std::move(outcome.flat), outcome.passes, config.restarts + extra);
  }
  return result;
}

}  // namespace bimod
