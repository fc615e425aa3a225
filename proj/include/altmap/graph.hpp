#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace altmap {

/// Undirected weighted graph in adjacency-list form. Node names are only
/// used for output; algorithms work on indices.
class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t node;
    double weight;
  };

  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n);
  explicit WeightedGraph(std::vector<std::string> names);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Adds weight to the undirected edge {u, v}. A self-loop {u, u} adds 2w to
  /// the diagonal entry A_uu so that it contributes 2w to the degree of u.
  void add_edge(std::size_t u, std::size_t v, double w);
  /// Sorts neighbor lists and merges parallel edges. Called by algorithms
  /// that need canonical adjacency; idempotent.
  void finalize();

  /// Neighbors excluding the node itself.
  const std::vector<Neighbor>& neighbors(std::size_t i) const { return adjacency_[i]; }
  /// Diagonal entry A_ii.
  double self_weight(std::size_t i) const { return self_[i]; }
  /// k_i = sum_j A_ij (diagonal included).
  double degree(std::size_t i) const;
  /// 2m = sum_i k_i.
  double total_weight() const;
  std::size_t edge_count() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> self_;
};

}  // namespace altmap
