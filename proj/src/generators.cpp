#include "bimod/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>

#include "bimod/rng.hpp"

namespace bimod {

namespace {

void check_ring(const RingSpec& spec) {
  if (spec.cliques < 3) throw Error("ring needs at least 3 cliques");
  if (spec.clique_size < 1) throw Error("clique size must be at least 1");
}

// Places `total` weight on distinct pairs drawn uniformly from `pairs`:
// unit links plus one fractional link when total is not an integer.
void place_links(std::vector<Edge>& edges, std::vector<std::pair<int, int>> pairs,
                 double total, SplitMix64& rng, const char* what) {
  if (total <= 0.0) return;
  double whole = std::floor(total);
  double frac = total - whole;
  std::size_t needed = static_cast<std::size_t>(whole) + (frac > 0.0 ? 1 : 0);
  if (needed > pairs.size()) {
    throw InfeasibleSpecError(std::string(what) + ": " + std::to_string(total) +
                              " weight does not fit on " + std::to_string(pairs.size()) +
                              " available pairs");
  }
  rng.shuffle(pairs);
  for (std::size_t i = 0; i < needed; ++i) {
    double w = (frac > 0.0 && i + 1 == needed) ? frac : 1.0;
    edges.push_back({pairs[i].first, pairs[i].second, w});
  }
}

}  // namespace

const Partition& RingNetwork::merged_partition() const {
  if (!merged) throw OddMergeRequestError("merged pairs need an even clique count");
  return *merged;
}

RingNetwork gen_ring(const RingSpec& spec) {
  check_ring(spec);
  int n = spec.cliques, k = spec.clique_size;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k * k + n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < k; ++r) {
      for (int b = 0; b < k; ++b) {
        edges.push_back({i * k + r, i * k + b, 1.0});
      }
    }
  }
  // clique i's first blue node links to clique (i+1)'s first red node, so
  // every clique carries one outgoing and one incoming ring endpoint
  for (int i = 0; i < n; ++i) {
    edges.push_back({((i + 1) % n) * k, i * k, 1.0});
  }

  std::vector<int> split(n * k);
  for (int i = 0; i < n * k; ++i) split[i] = i / k;
  RingNetwork net{build_graph(n * k, n * k, std::move(edges)),
                  Partition(split, split), std::nullopt};
  if (n % 2 == 0) {
    std::vector<int> merged(n * k);
    for (int i = 0; i < n * k; ++i) merged[i] = i / (2 * k);
    net.merged = Partition(merged, merged);
  }
  return net;
}

namespace {

void check_benchmark(const BenchmarkSpec& spec) {
  if (spec.red1 < 1 || spec.blue1 < 1 || spec.red2 < 1 || spec.blue2 < 1) {
    throw Error("clique sides must be at least 1");
  }
  double prod1 = static_cast<double>(spec.red1) * spec.blue1;
  double prod2 = static_cast<double>(spec.red2) * spec.blue2;
  if (prod2 < prod1) {
    throw Error("clique 2 must be at least as large as clique 1 (by pair count)");
  }
  if (spec.inter_weight < 0.0 || spec.clique1_external < 0.0 ||
      spec.clique2_external < 0.0 || spec.external_weight < 0.0) {
    throw Error("link totals must be nonnegative");
  }
  if (spec.inter_weight > std::sqrt(prod1 * prod2)) {
    throw InfeasibleSpecError("inter-clique weight exceeds sqrt(n_r1 n_b1 n_r2 n_b2)");
  }
  if (spec.clique1_external > spec.weak_coupling_cap * prod1 ||
      spec.clique2_external > spec.weak_coupling_cap * prod2) {
    throw InfeasibleSpecError("clique-external coupling violates the weak-coupling cap");
  }
}

// Smallest red+blue split whose pair count holds `edges` distinct edges.
std::pair<int, int> minimal_external_split(std::size_t edges) {
  if (edges == 0) return {0, 0};
  std::pair<int, int> best{1, static_cast<int>(edges)};
  for (int a = 1; static_cast<std::size_t>(a) * a <= edges; ++a) {
    int b = static_cast<int>((edges + a - 1) / a);
    if (a + b < best.first + best.second) best = {a, b};
  }
  return best;
}

}  // namespace

NondimParams nondim_coordinates(const BenchmarkSpec& spec) {
  check_benchmark(spec);
  double prod1 = static_cast<double>(spec.red1) * spec.blue1;
  double prod2 = static_cast<double>(spec.red2) * spec.blue2;
  double scale = std::sqrt(prod1 * prod2);
  return make_nondim(std::sqrt(prod1) / std::sqrt(prod2), spec.inter_weight / scale,
                     spec.external_weight / scale);
}

BenchmarkNetwork gen_benchmark(const BenchmarkSpec& spec, std::uint64_t seed) {
  check_benchmark(spec);
  SplitMix64 rng(derive_seed(seed, 0x42));

  // external sizing: by default the smallest node count that supports the
  // external weight as unit links
  int ext_red = 0, ext_blue = 0;
  if (spec.external_nodes >= 0) {
    ext_red = spec.external_nodes / 2;
    ext_blue = spec.external_nodes - ext_red;
  } else if (spec.external_weight > 0.0) {
    auto split = minimal_external_split(
        static_cast<std::size_t>(std::ceil(spec.external_weight)));
    ext_red = split.first;
    ext_blue = split.second;
  }
  if (spec.external_weight > 0.0 && (ext_red < 1 || ext_blue < 1)) {
    throw InfeasibleSpecError("external weight needs nodes of both classes");
  }

  int red_total = spec.red1 + spec.red2 + ext_red;
  int blue_total = spec.blue1 + spec.blue2 + ext_blue;
  int red2_off = spec.red1, blue2_off = spec.blue1;
  int ext_red_off = spec.red1 + spec.red2, ext_blue_off = spec.blue1 + spec.blue2;

  std::vector<Edge> edges;
  for (int r = 0; r < spec.red1; ++r)
    for (int b = 0; b < spec.blue1; ++b) edges.push_back({r, b, 1.0});
  for (int r = 0; r < spec.red2; ++r)
    for (int b = 0; b < spec.blue2; ++b) edges.push_back({red2_off + r, blue2_off + b, 1.0});

  // external component: random spanning tree first, extra pairs afterwards
  if (spec.external_weight > 0.0) {
    std::vector<Edge> tree;
    tree.push_back({ext_red_off, ext_blue_off, 1.0});  // joins the two class roots
    std::vector<int> placed_red{0}, placed_blue{0};    // local external indices
    std::vector<std::pair<bool, int>> pending;         // (is_red, local index)
    for (int v = 1; v < ext_red; ++v) pending.emplace_back(true, v);
    for (int v = 1; v < ext_blue; ++v) pending.emplace_back(false, v);
    rng.shuffle(pending);
    for (auto [is_red, v] : pending) {
      if (is_red) {
        int b = placed_blue[rng.below(placed_blue.size())];
        tree.push_back({ext_red_off + v, ext_blue_off + b, 1.0});
        placed_red.push_back(v);
      } else {
        int r = placed_red[rng.below(placed_red.size())];
        tree.push_back({ext_red_off + r, ext_blue_off + v, 1.0});
        placed_blue.push_back(v);
      }
    }

    std::size_t tree_edges = tree.size();
    double remaining = spec.external_weight;
    if (remaining < static_cast<double>(tree_edges)) {
      // not enough weight for unit links; spread it evenly over the tree
      for (Edge& e : tree) e.weight = remaining / static_cast<double>(tree_edges);
      edges.insert(edges.end(), tree.begin(), tree.end());
    } else {
      edges.insert(edges.end(), tree.begin(), tree.end());
      remaining -= static_cast<double>(tree_edges);
      std::unordered_set<std::uint64_t> used;
      for (const Edge& e : tree) {
        used.insert((static_cast<std::uint64_t>(e.red) << 32) |
                    static_cast<std::uint32_t>(e.blue));
      }
      std::vector<std::pair<int, int>> free_pairs;
      for (int r = 0; r < ext_red; ++r) {
        for (int b = 0; b < ext_blue; ++b) {
          std::uint64_t key = (static_cast<std::uint64_t>(ext_red_off + r) << 32) |
                              static_cast<std::uint32_t>(ext_blue_off + b);
          if (!used.count(key)) free_pairs.emplace_back(ext_red_off + r, ext_blue_off + b);
        }
      }
      place_links(edges, std::move(free_pairs), remaining, rng, "external component");
    }
  }

  // inter-clique links over both cross orientations
  {
    std::vector<std::pair<int, int>> pairs;
    for (int r = 0; r < spec.red1; ++r)
      for (int b = 0; b < spec.blue2; ++b) pairs.emplace_back(r, blue2_off + b);
    for (int r = 0; r < spec.red2; ++r)
      for (int b = 0; b < spec.blue1; ++b) pairs.emplace_back(red2_off + r, b);
    place_links(edges, std::move(pairs), spec.inter_weight, rng, "inter-clique links");
  }
  // clique-to-external attachments
  if (spec.clique1_external > 0.0 || spec.clique2_external > 0.0) {
    if (ext_red + ext_blue == 0) {
      throw InfeasibleSpecError("clique-external links need an external component");
    }
    std::vector<std::pair<int, int>> pairs1, pairs2;
    for (int r = 0; r < spec.red1; ++r)
      for (int b = 0; b < ext_blue; ++b) pairs1.emplace_back(r, ext_blue_off + b);
    for (int r = 0; r < ext_red; ++r)
      for (int b = 0; b < spec.blue1; ++b) pairs1.emplace_back(ext_red_off + r, b);
    for (int r = 0; r < spec.red2; ++r)
      for (int b = 0; b < ext_blue; ++b) pairs2.emplace_back(red2_off + r, ext_blue_off + b);
    for (int r = 0; r < ext_red; ++r)
      for (int b = 0; b < spec.blue2; ++b)
        pairs2.emplace_back(ext_red_off + r, blue2_off + b);
    place_links(edges, std::move(pairs1), spec.clique1_external, rng, "clique 1 attachments");
    place_links(edges, std::move(pairs2), spec.clique2_external, rng, "clique 2 attachments");
  }

  auto make_partition = [&](bool merge_cliques) {
    std::vector<int> red(red_total), blue(blue_total);
    for (int r = 0; r < red_total; ++r) {
      if (r < red2_off) red[r] = 0;
      else if (r < ext_red_off) red[r] = merge_cliques ? 0 : 1;
      else red[r] = merge_cliques ? 1 : 2;
    }
    for (int b = 0; b < blue_total; ++b) {
      if (b < blue2_off) blue[b] = 0;
      else if (b < ext_blue_off) blue[b] = merge_cliques ? 0 : 1;
      else blue[b] = merge_cliques ? 1 : 2;
    }
    return Partition(std::move(red), std::move(blue));
  };

  return {build_graph(red_total, blue_total, std::move(edges)), make_partition(false),
          make_partition(true), ext_red, ext_blue};
}

namespace {

void check_hierarchy(const HierarchySpec& spec) {
  if (spec.levels < 1) throw Error("hierarchy needs at least one level");
  if (spec.base_red < 1 || spec.base_blue < 1) throw Error("base clique sides must be at least 1");
  if (spec.levels > 1 && spec.branching < 2) {
    throw Error("multi-level hierarchy needs branching of at least 2");
  }
  if (static_cast<int>(spec.level_weights.size()) != spec.levels) {
    throw Error("need one level weight per level");
  }
  for (int i = 0; i < spec.levels; ++i) {
    if (!(spec.level_weights[i] > 0.0)) throw Error("level weights must be positive");
    if (i > 0 && !(spec.level_weights[i] < spec.level_weights[i - 1])) {
      throw Error("level weights must decrease strictly up the hierarchy");
    }
  }
}

}  // namespace

HierarchyNetwork gen_hierarchy(const HierarchySpec& spec) {
  check_hierarchy(spec);
  int blocks = 1;
  for (int l = 1; l < spec.levels; ++l) blocks *= spec.branching;
  int red_total = blocks * spec.base_red;
  int blue_total = blocks * spec.base_blue;

  // level of the lowest common ancestor block of two level-1 block ids
  auto join_level = [&](int block_a, int block_b) {
    int level = 1;
    while (block_a != block_b) {
      block_a /= spec.branching;
      block_b /= spec.branching;
      ++level;
    }
    return level;
  };

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(red_total) * blue_total);
  for (int r = 0; r < red_total; ++r) {
    int rb = r / spec.base_red;
    for (int b = 0; b < blue_total; ++b) {
      int level = join_level(rb, b / spec.base_blue);
      edges.push_back({r, b, spec.level_weights[level - 1]});
    }
  }

  HierarchyNetwork net{build_graph(red_total, blue_total, std::move(edges)), {}};
  int stride = 1;
  for (int level = 1; level <= spec.levels; ++level) {
    std::vector<int> red(red_total), blue(blue_total);
    for (int r = 0; r < red_total; ++r) red[r] = (r / spec.base_red) / stride;
    for (int b = 0; b < blue_total; ++b) blue[b] = (b / spec.base_blue) / stride;
    net.level_partitions.emplace_back(std::move(red), std::move(blue));
    stride *= spec.branching;
  }
  return net;
}

}  // namespace bimod
