#include "altmap/community.hpp"
#include "altmap/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace altmap;
using namespace testsupport;

TEST_CASE("modularity: one community is exactly zero") {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + g.below(15);
    auto edges = random_edges(g, n, 0.4, trial % 2 == 0);
    edges.push_back({0, 1, 1.0});
    const auto graph = make_graph(n, edges);
    const std::vector<std::size_t> all(n, 0);
    CHECK(modularity(graph, all) == 0.0);
  }
}

TEST_CASE("modularity: K2 singletons is exactly -0.5") {
  const auto graph = make_graph(2, {{0, 1, 1.0}});
  const std::vector<std::size_t> singletons = {0, 1};
  CHECK(modularity(graph, singletons) == -0.5);
}

TEST_CASE("modularity: matches the dense definition, including self-loops") {
  Gen g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + g.below(10);
    auto edges = random_edges(g, n, 0.5, false);
    if (g.chance(0.5)) edges.push_back({g.below(n), g.below(n), g.uniform(0.5, 2.0)});
    if (edges.empty()) edges.push_back({0, 0, 1.0});
    const auto graph = make_graph(n, edges);
    const auto dense = make_dense(n, edges);
    std::vector<std::size_t> c(n);
    for (auto& x : c) x = g.below(4);
    const double gamma = g.uniform(0.3, 2.0);
    CHECK(modularity(graph, c, gamma) == doctest::Approx(dense_modularity(dense, c, gamma)).epsilon(1e-12));
  }
}

TEST_CASE("modularity: invariant under weight scaling and relabeling") {
  Gen g(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + g.below(12);
    auto edges = random_edges(g, n, 0.5, false);
    edges.push_back({0, 1, 1.0});
    auto scaled = edges;
    const double c = g.uniform(0.01, 100.0);
    for (auto& e : scaled) e.w *= c;
    std::vector<std::size_t> part(n);
    for (auto& x : part) x = g.below(3);
    const double q = modularity(make_graph(n, edges), part);
    CHECK(std::abs(modularity(make_graph(n, scaled), part) - q) <= 1e-12);
    auto relabeled = part;
    for (auto& x : relabeled) x = 10 - x;
    CHECK(modularity(make_graph(n, edges), relabeled) == q);
    CHECK(q >= -1.0);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("modularity: empty graph throws") {
  const std::vector<std::size_t> c = {0, 1, 2};
  CHECK_THROWS_AS(modularity(WeightedGraph(3), c), Error);
}

TEST_CASE("detect_communities: two K5 joined by a bridge") {
  const auto edges = two_k5_bridge();
  const auto graph = make_graph(10, edges);
  for (std::uint64_t seed : {0ull, 1ull, 7ull, 12345ull}) {
    ModularityParams params;
    params.seed = seed;
    const auto p = detect_communities(graph, params);
    CHECK(p.community_count == 2);
    CHECK(p.assignment == std::vector<std::size_t>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  }
  // The clique split is the optimum of a reduced analogue: two triangles and a bridge.
  std::vector<EdgeSpec> small = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}};
  const auto best = exhaustive_best_q(make_dense(6, small));
  const auto p = detect_communities(make_graph(6, small), {});
  CHECK(std::abs(p.modularity - best) <= 1e-12);
  CHECK(p.assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("detect_communities: exhaustive optimum on small random graphs") {
  Gen g(2024);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + g.below(7);
    auto edges = random_edges(g, n, 0.2 + 0.6 * g.uniform(0, 1), trial % 3 != 0);
    if (edges.empty()) continue;
    const auto graph = make_graph(n, edges);
    const auto dense = make_dense(n, edges);
    const double gamma = trial % 4 == 0 ? g.uniform(0.5, 1.5) : 1.0;
    ModularityParams params;
    params.resolution = gamma;
    params.seed = trial;
    const auto p = detect_communities(graph, params);
    const double best = exhaustive_best_q(dense, gamma);
    CAPTURE(trial);
    CHECK(p.modularity >= best - 1e-12);
    CHECK(std::abs(p.modularity - dense_modularity(dense, p.assignment, gamma)) <= 1e-12);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("detect_communities: partition invariants, determinism and baseline") {
  Gen g(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + g.below(60);
    const auto graph = make_graph(n, random_edges(g, n, 4.0 / double(n), trial % 2 == 0));
    if (graph.total_weight() == 0) continue;
    ModularityParams params;
    params.seed = trial;
    const auto p = detect_communities(graph, params);
    const auto again = detect_communities(graph, params);
    CHECK(p.assignment == again.assignment);
    CHECK(p.seed == params.seed);
    REQUIRE(p.assignment.size() == n);
    std::vector<std::size_t> sizes(p.community_count, 0);
    for (const auto c : p.assignment) {
      REQUIRE(c < p.community_count);
      ++sizes[c];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) CHECK(sizes[c] > 0);
    for (std::size_t c = 1; c < sizes.size(); ++c) CHECK(sizes[c - 1] >= sizes[c]);
    CHECK(std::abs(p.modularity - modularity(graph, p.assignment)) <= 1e-12);
    const auto base = local_moving_baseline(graph, params);
    CHECK(p.modularity >= base.modularity - 1e-12);
  }
}

TEST_CASE("detect_communities: edgeless graph gives singletons") {
  const auto p = detect_communities(WeightedGraph(4), {});
  CHECK(p.assignment == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(p.community_count == 4);
  CHECK(p.modularity == 0.0);
  CHECK_THROWS_AS(detect_communities(WeightedGraph(0), {}), Error);
}

TEST_CASE("detect_communities: isolated nodes stay singletons") {
  auto edges = two_k5_bridge();
  const auto graph = make_graph(12, edges);
  const auto p = detect_communities(graph, {});
  CHECK(p.community_count == 4);
  CHECK(p.assignment[10] != p.assignment[11]);
  CHECK(p.assignment[10] >= 2);
}

TEST_CASE("ModularityParams validation") {
  ModularityParams p;
  p.resolution = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.min_improvement = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("cluster_sizes and partition CSV") {
  Partition p;
  p.assignment = {0, 0, 1};
  p.community_count = 2;
  CHECK(cluster_sizes(p) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 1}});
  p.assignment = {0, 1, 2, 3};
  p.community_count = 4;
  CHECK(cluster_sizes(p) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 1}, {2, 1}, {3, 1}});

  WeightedGraph g(std::vector<std::string>{"a", "b"});
  g.add_edge(0, 1, 1.0);
  g.finalize();
  const auto part = detect_communities(g, {});
  const auto csv = partition_csv(g, part);
  CHECK(csv.rfind("# gamma=1 seed=0 modularity=", 0) == 0);
  CHECK(csv.find("\nnode_id,community_id\na,0\nb,0\n") != std::string::npos);
}
