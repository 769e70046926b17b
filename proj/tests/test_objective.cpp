#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bimod/generators.hpp"
#include "bimod/objective.hpp"
#include "testutil.hpp"

using namespace bimod;

TEST_CASE("internal_density conventions") {
  CommunityStats full{9, 9, 9, 3, 3, 1.0};
  CHECK(internal_density(full, DensityMode::unweighted, 1.0) == 1.0);

  CommunityStats half{3, 0, 0, 2, 3, 0.5};
  CHECK(internal_density(half, DensityMode::unweighted, 1.0) == 0.5);

  CommunityStats doubled{6, 0, 0, 2, 3, 1.0};
  CHECK(internal_density(doubled, DensityMode::weighted, 2.0) == 0.5);

  CommunityStats single_class{0, 4, 0, 2, 0, 0.0};
  CHECK(internal_density(single_class, DensityMode::unweighted, 1.0) == 0.0);
}

TEST_CASE("evaluate_qb reproduces the clique-ring values") {
  auto r4 = gen_ring({4, 2});
  CHECK(evaluate_qb(r4.graph, r4.split).total == doctest::Approx(0.55).epsilon(1e-13));
  CHECK(evaluate_qb(r4.graph, r4.merged_partition()).total ==
        doctest::Approx(0.40).epsilon(1e-13));

  auto r12 = gen_ring({12, 2});
  CHECK(evaluate_qb(r12.graph, r12.split).total ==
        doctest::Approx(43.0 / 60.0).epsilon(1e-13));
  CHECK(evaluate_qb(r12.graph, r12.merged_partition()).total ==
        doctest::Approx(44.0 / 60.0).epsilon(1e-13));
}

TEST_CASE("evaluate_qb of an edgeless graph is zero") {
  auto g = build_graph(2, 2, {});
  CHECK(evaluate_qb(g, Partition::singletons(2, 2)).total == 0.0);
}

TEST_CASE("evaluate_qbg closed-form cases") {
  auto g = build_graph(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  auto whole = Partition::single_community(2, 2);
  CHECK(evaluate_qbg(g, whole, {1.0, DensityMode::unweighted}).total == 0.0);

  // every ring clique has density 1, so chi = 1 keeps the chi = 0 value
  auto r4 = gen_ring({4, 2});
  CHECK(evaluate_qbg(r4.graph, r4.split, {1.0, DensityMode::unweighted}).total ==
        doctest::Approx(0.55).epsilon(1e-13));
}

TEST_CASE("chi = 0 reduces exactly to plain modularity") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = test::random_graph(rng, 10, 0.4, true);
    auto p = test::random_partition(rng, g.red_count(), g.blue_count(), 5);
    double qb = evaluate_qb(g, p).total;
    for (DensityMode mode : {DensityMode::unweighted, DensityMode::weighted}) {
      CHECK(std::abs(evaluate_qbg(g, p, {0.0, mode}).total - qb) <= 1e-12);
    }
  }
}

TEST_CASE("per-community terms sum to the total") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = test::random_graph(rng, 10, 0.5, true);
    auto p = test::random_partition(rng, g.red_count(), g.blue_count(), 6);
    auto value = evaluate_qbg(g, p, {1.7, DensityMode::weighted});
    double sum = 0;
    for (double term : value.per_community) sum += term;
    CHECK(std::abs(sum - value.total) <=
          1e-12 * std::max<double>(1, value.per_community.size()));
  }
}

TEST_CASE("whole-component community term never exceeds its internal share") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = test::random_graph(rng, 8, 0.7, true);
    auto value = evaluate_qb(g, Partition::single_community(g.red_count(), g.blue_count()));
    if (g.total_weight() == 0.0) continue;
    auto stats = community_stats(g, Partition::single_community(g.red_count(), g.blue_count()));
    CHECK(value.per_community[0] <= stats[0].internal_weight / g.total_weight() + 1e-12);
  }
}

TEST_CASE("negative chi rejects zero-density communities") {
  auto g = build_graph(2, 1, {{0, 0, 1}});  // red 1 is isolated
  auto p = Partition({0, 1}, {0});          // community 1 is a lone red node
  CHECK_THROWS_AS(evaluate_qbg(g, p, {-0.5, DensityMode::unweighted}),
                  DegenerateDensityError);
  // chi = 0 keeps the exact reduction, chi > 0 zeroes the community out
  CHECK(evaluate_qbg(g, p, {0.0, DensityMode::unweighted}).total ==
        evaluate_qb(g, p).total);
  CHECK_NOTHROW(evaluate_qbg(g, p, {2.0, DensityMode::unweighted}));
}

TEST_CASE("weight scaling in weighted mode preserves partition ranking") {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    auto base = test::random_graph(rng, 4, 0.7, true);
    if (base.total_weight() == 0.0) continue;
    std::vector<Partition> partitions;
    for (int i = 0; i < 12; ++i) {
      partitions.push_back(
          test::random_partition(rng, base.red_count(), base.blue_count(), 3));
    }
    std::vector<std::vector<double>> scores;
    for (double lambda : {1.0, 10.0, 0.01}) {
      std::vector<Edge> scaled = base.edges();
      for (Edge& e : scaled) e.weight *= lambda;
      auto g = build_graph(base.red_count(), base.blue_count(), scaled);
      std::vector<double> vals;
      for (const auto& p : partitions) {
        vals.push_back(evaluate_qbg(g, p, {1.3, DensityMode::weighted}).total);
      }
      scores.push_back(std::move(vals));
    }
    auto ranking = [](const std::vector<double>& vals) {
      std::vector<int> idx(vals.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int a, int b) { return vals[a] > vals[b] + 1e-9; });
      return idx;
    };
    auto r0 = ranking(scores[0]);
    CHECK(ranking(scores[1]) == r0);
    CHECK(ranking(scores[2]) == r0);
  }
}

TEST_CASE("move_delta matches full re-evaluation") {
  SplitMix64 rng(15);
  auto check_move = [&](const BipartiteGraph& g, const Partition& p, NodeRef node,
                        int target, const Resolution& res) {
    auto stats = community_stats(g, p);
    double delta = move_delta(g, p, stats, node, target, res);
    std::vector<int> red = p.red_assignment(), blue = p.blue_assignment();
    int fresh = p.num_communities();
    if (node.node_class == NodeClass::red) {
      red[node.index] = target == fresh ? fresh : target;
    } else {
      blue[node.index] = target == fresh ? fresh : target;
    }
    Partition moved(red, blue);
    double full = evaluate_qbg(g, moved, res).total - evaluate_qbg(g, p, res).total;
    CHECK(std::abs(delta - full) <= 1e-10);
  };

  // no-op guard
  auto g = build_graph(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  Partition split({0, 1}, {0, 1});
  auto stats = community_stats(g, split);
  CHECK(move_delta(g, split, stats, {NodeClass::red, 1}, 1,
                   {0.0, DensityMode::unweighted}) == 0.0);

  // K22 split pairs, move r1 into the first community at chi = 0
  check_move(g, split, {NodeClass::red, 1}, 0, {0.0, DensityMode::unweighted});

  for (int trial = 0; trial < 200; ++trial) {
    auto graph = test::random_graph(rng, 6, 0.6, true);
    auto p = test::random_partition(rng, graph.red_count(), graph.blue_count(), 3);
    bool red_side = rng.below(2) == 0;
    NodeRef node{red_side ? NodeClass::red : NodeClass::blue,
                 static_cast<int>(rng.below(red_side ? graph.red_count()
                                                     : graph.blue_count()))};
    int target = static_cast<int>(rng.below(p.num_communities() + 1));
    for (double chi : {0.0, 1.7, 0.4, -0.6}) {
      try {
        check_move(graph, p, node, target, {chi, DensityMode::weighted});
      } catch (const DegenerateDensityError&) {
        // expected whenever the state or move hits a zero-density community
      }
    }
  }
}

TEST_CASE("move_delta telescopes over a move sequence") {
  SplitMix64 rng(16);
  auto g = test::random_graph(rng, 8, 0.5, true);
  auto p = test::random_partition(rng, g.red_count(), g.blue_count(), 4);
  Resolution res{1.2, DensityMode::weighted};
  double start = evaluate_qbg(g, p, res).total;
  double accumulated = 0.0;
  for (int step = 0; step < 100; ++step) {
    auto stats = community_stats(g, p);
    bool red_side = rng.below(2) == 0;
    NodeRef node{red_side ? NodeClass::red : NodeClass::blue,
                 static_cast<int>(rng.below(red_side ? g.red_count() : g.blue_count()))};
    int target = static_cast<int>(rng.below(p.num_communities() + 1));
    accumulated += move_delta(g, p, stats, node, target, res);
    std::vector<int> red = p.red_assignment(), blue = p.blue_assignment();
    if (red_side) {
      red[node.index] = target;
    } else {
      blue[node.index] = target;
    }
    p = Partition(red, blue);
  }
  double finish = evaluate_qbg(g, p, res).total;
  CHECK(std::abs((finish - start) - accumulated) <= 1e-9);
}
