#include "altmap/graph.hpp"

#include <algorithm>

namespace altmap {

WeightedGraph::WeightedGraph(std::size_t n) : adjacency_(n), self_(n, 0.0) {
  names_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
}

WeightedGraph::WeightedGraph(std::vector<std::string> names)
    : names_(std::move(names)), adjacency_(names_.size()), self_(names_.size(), 0.0) {}

void WeightedGraph::add_edge(std::size_t u, std::size_t v, double w) {
  if (u == v) {
    self_[u] += 2.0 * w;
    return;
  }
  adjacency_[u].push_back({v, w});
  adjacency_[v].push_back({u, w});
}

void WeightedGraph::finalize() {
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    std::vector<Neighbor> merged;
    merged.reserve(list.size());
    for (const auto& nb : list) {
      if (!merged.empty() && merged.back().node == nb.node) {
        merged.back().weight += nb.weight;
      } else {
        merged.push_back(nb);
      }
    }
    list = std::move(merged);
  }
}

double WeightedGraph::degree(std::size_t i) const {
  double k = self_[i];
  for (const auto& nb : adjacency_[i]) k += nb.weight;
  return k;
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (std::size_t i = 0; i < node_count(); ++i) total += degree(i);
  return total;
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t pairs = 0;
  std::size_t loops = 0;
  for (std::size_t i = 0; i < node_count(); ++i) {
    for (const auto& nb : adjacency_[i]) {
      if (nb.node > i) ++pairs;
    }
    if (self_[i] != 0.0) ++loops;
  }
  return pairs + loops;
}

}  // namespace altmap
