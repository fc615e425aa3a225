#pragma once

#include "altmap/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace altmap {

struct ModularityParams {
  double resolution = 1.0;  // gamma > 0
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;  // smart-local-moving cycles per start
  double min_improvement = 1e-10;
  std::size_t random_starts = 10;

  /// Throws Error(InvalidConfig) when a field is out of range.
  void validate() const;
};

struct Partition {
  std::vector<std::size_t> assignment;  // node -> community, ids dense from 0
  std::size_t community_count = 0;
  /// Q of `assignment`. Defined as 0 for graphs without edges.
  double modularity = 0.0;
  double resolution = 1.0;
  std::uint64_t seed = 0;
};

/// Q = (1/2m) sum_ij (A_ij - gamma k_i k_j / 2m) delta(c_i, c_j).
/// Throws Error(EmptyGraph) when 2m = 0.
double modularity(const WeightedGraph& graph, std::span<const std::size_t> assignment,
                  double resolution = 1.0);

/// Smart local moving: local moving, then per-community refinement by local
/// moving on the induced subnetwork, aggregation, and recursion on the
/// aggregate network. Cycles repeat until Q improves by less than
/// min_improvement; the best of `random_starts` seeded starts is kept.
/// Communities are numbered by decreasing size, ties by lowest member index.
/// Throws Error(EmptyGraph) for a graph without nodes.
Partition detect_communities(const WeightedGraph& graph, const ModularityParams& params);

/// Single-level local moving from singletons, seeded like the first start of
/// detect_communities(). Used as the comparison baseline.
Partition local_moving_baseline(const WeightedGraph& graph, const ModularityParams& params);

/// (community id, size), largest first, ties by id.
std::vector<std::pair<std::size_t, std::size_t>> cluster_sizes(const Partition& partition);

/// `# gamma=... seed=... modularity=...` comment, `node_id,community_id`
/// header, one row per node in index order.
std::string partition_csv(const WeightedGraph& graph, const Partition& partition);

}  // namespace altmap
