#pragma once

#include "altmap/corpus.hpp"
#include "altmap/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace altmap {

enum class NodeKind : std::uint8_t { paper, twitter, news, policy, other };

std::string_view token(NodeKind k);
std::optional<NodeKind> node_kind_from_token(std::string_view tok) noexcept;
NodeKind node_kind_of(ActorClass c);

struct AttentionNode {
  std::string id;  // paper: the DOI; actor: "<class>:<actor_id>"
  NodeKind kind = NodeKind::paper;
  std::string label;

  bool is_paper() const noexcept { return kind == NodeKind::paper; }
  friend bool operator==(const AttentionNode&, const AttentionNode&) = default;
};

struct AttentionEdge {
  std::size_t actor;  // node index
  std::size_t paper;  // node index
  std::uint64_t weight;

  friend bool operator==(const AttentionEdge&, const AttentionEdge&) = default;
};

/// Two-mode publication/actor graph. Nodes are sorted by id; edges by
/// (actor, paper). Every edge joins an actor node to a paper node.
class AttentionGraph {
 public:
  AttentionGraph() = default;
  /// Sorts nodes by id, remaps and merges edges. Throws
  /// Error(DegenerateInput) on duplicate ids, zero weights or same-side edges.
  AttentionGraph(std::vector<AttentionNode> nodes, std::vector<AttentionEdge> edges);

  const std::vector<AttentionNode>& nodes() const noexcept { return nodes_; }
  const std::vector<AttentionEdge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::optional<std::size_t> find(const std::string& id) const;

  /// Sum of incident edge weights.
  std::vector<std::uint64_t> weighted_degrees() const;
  std::uint64_t total_weight() const;
  /// Unipartite weighted view for community detection.
  WeightedGraph to_weighted_graph() const;

  friend bool operator==(const AttentionGraph&, const AttentionGraph&) = default;

 private:
  std::vector<AttentionNode> nodes_;
  std::vector<AttentionEdge> edges_;
};

/// One actor node per (platform class, actor_id); edge weight = number of
/// linked mentions from that actor to that paper. Throws
/// Error(EmptySelection) for an empty platform set.
AttentionGraph build_graph(const LinkedCorpus& corpus, const std::set<PlatformKind>& platforms);

struct NodeShareReport {
  std::size_t nodes = 0;
  std::size_t paper_nodes = 0;
  std::map<NodeKind, std::size_t> actor_nodes;
  std::size_t edges = 0;
  std::uint64_t weight = 0;
  std::map<NodeKind, std::size_t> edges_by_kind;
  std::map<NodeKind, std::uint64_t> weight_by_kind;

  double node_share(NodeKind k) const;
  /// Share of distinct actor-paper edges touching an actor of kind k.
  double edge_share(NodeKind k) const;
  /// Share of mentions (edge weight) from actors of kind k.
  double mention_share(NodeKind k) const;
  std::string to_text() const;
};

NodeShareReport node_shares(const AttentionGraph& graph);

struct ActorDistribution {
  std::map<std::size_t, std::size_t> histogram;  // distinct papers -> actors
  std::size_t total_actors = 0;
  std::optional<double> mean;                // absent when total_actors == 0
  std::optional<double> standard_deviation;  // population SD

  double share_at(std::size_t k) const;
  std::string to_csv() const;
};

ActorDistribution actor_distribution(const AttentionGraph& graph, ActorClass cls);

/// Keeps the top ceil(fraction * |V|) nodes by weighted degree (ties by id),
/// then the connected component of the induced subgraph that contains the
/// highest-ranked kept node. Throws Error(InvalidFraction) outside (0, 1].
AttentionGraph filter_for_display(const AttentionGraph& graph, double fraction);

enum class ProjectionSide { papers, actors };

/// Same-side nodes joined with weight = number of shared opposite-side
/// neighbors. Node names are the attention-graph ids of that side.
WeightedGraph project_comention(const AttentionGraph& graph, ProjectionSide side);

enum class GraphFormat { graphml, edgelist };

std::string to_graphml(const AttentionGraph& graph);
std::string to_edgelist(const AttentionGraph& graph);
/// Throws Error(MalformedRecord) on unparseable input.
AttentionGraph from_graphml(std::string_view text);
/// Kinds are recovered from id prefixes; labels default to the bare id.
AttentionGraph from_edgelist(std::string_view text);

void export_graph(const AttentionGraph& graph, GraphFormat format, const std::string& path);
AttentionGraph import_graph(const std::string& path, GraphFormat format);

}  // namespace altmap
