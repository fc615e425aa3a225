#include "altmap/network.hpp"

#include "altmap/error.hpp"
#include "altmap/util.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace altmap {

std::string_view token(NodeKind k) {
  switch (k) {
    case NodeKind::paper: return "paper";
    case NodeKind::twitter: return "twitter";
    case NodeKind::news: return "news";
    case NodeKind::policy: return "policy";
    case NodeKind::other: return "other";
  }
  return "paper";
}

std::optional<NodeKind> node_kind_from_token(std::string_view tok) noexcept {
  for (auto k : {NodeKind::paper, NodeKind::twitter, NodeKind::news, NodeKind::policy,
                 NodeKind::other}) {
    if (token(k) == tok) return k;
  }
  return std::nullopt;
}

NodeKind node_kind_of(ActorClass c) {
  switch (c) {
    case ActorClass::twitter: return NodeKind::twitter;
    case ActorClass::news: return NodeKind::news;
    case ActorClass::policy: return NodeKind::policy;
    case ActorClass::other: return NodeKind::other;
  }
  return NodeKind::other;
}

AttentionGraph::AttentionGraph(std::vector<AttentionNode> nodes, std::vector<AttentionEdge> edges) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; });
  std::vector<std::size_t> new_index(nodes.size());
  nodes_.reserve(nodes.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && nodes[order[r]].id == nodes_.back().id) {
      throw Error(ErrorKind::DegenerateInput, "duplicate node id '" + nodes_.back().id + "'");
    }
    new_index[order[r]] = r;
    nodes_.push_back(std::move(nodes[order[r]]));
  }

  for (auto e : edges) {
    if (e.actor >= new_index.size() || e.paper >= new_index.size()) {
      throw Error(ErrorKind::DegenerateInput, "edge endpoint out of range");
    }
    e.actor = new_index[e.actor];
    e.paper = new_index[e.paper];
    if (nodes_[e.actor].is_paper() || !nodes_[e.paper].is_paper()) {
      throw Error(ErrorKind::DegenerateInput, "edge must join an actor to a paper");
    }
    if (e.weight == 0) throw Error(ErrorKind::DegenerateInput, "edge weight must be >= 1");
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end(), [](const AttentionEdge& a, const AttentionEdge& b) {
    return std::tie(a.actor, a.paper) < std::tie(b.actor, b.paper);
  });
  std::vector<AttentionEdge> merged;
  merged.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (!merged.empty() && merged.back().actor == e.actor && merged.back().paper == e.paper) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  edges_ = std::move(merged);
}

std::optional<std::size_t> AttentionGraph::find(const std::string& id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                   [](const AttentionNode& n, const std::string& v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::uint64_t> AttentionGraph::weighted_degrees() const {
  std::vector<std::uint64_t> deg(nodes_.size(), 0);
  for (const auto& e : edges_) {
    deg[e.actor] += e.weight;
    deg[e.paper] += e.weight;
  }
  return deg;
}

std::uint64_t AttentionGraph::total_weight() const {
  std::uint64_t total = 0;
  for (const auto& e : edges_) total += e.weight;
  return total;
}

WeightedGraph AttentionGraph::to_weighted_graph() const {
  std::vector<std::string> names;
  names.reserve(nodes_.size());
  for (const auto& n : nodes_) names.push_back(n.id);
  WeightedGraph g(std::move(names));
  for (const auto& e : edges_) g.add_edge(e.actor, e.paper, static_cast<double>(e.weight));
  g.finalize();
  return g;
}

AttentionGraph build_graph(const LinkedCorpus& corpus, const std::set<PlatformKind>& platforms) {
  if (platforms.empty()) throw Error(ErrorKind::EmptySelection, "no platforms selected");

  std::vector<AttentionNode> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> weights;
  const auto node_for = [&](std::string id, NodeKind kind, const std::string& label) {
    const auto [it, inserted] = index.try_emplace(id, nodes.size());
    if (inserted) nodes.push_back({std::move(id), kind, label});
    return it->second;
  };

  for (const auto& m : corpus.mentions()) {
    if (!m.linked() || !platforms.contains(m.record.platform)) continue;
    const auto& pub = corpus.publications()[*m.publication];
    const auto cls = actor_class_of(m.record.platform);
    const auto actor = node_for(std::string(token(cls)) + ":" + m.record.actor_id,
                                node_kind_of(cls),
                                m.record.actor_name.empty() ? m.record.actor_id : m.record.actor_name);
    const auto paper = node_for(pub.doi->value(), NodeKind::paper, pub.title);
    ++weights[{actor, paper}];
  }

  std::vector<AttentionEdge> edges;
  edges.reserve(weights.size());
  for (const auto& [key, w] : weights) edges.push_back({key.first, key.second, w});
  return AttentionGraph(std::move(nodes), std::move(edges));
}

// ---------------------------------------------------------------------------

namespace {
double ratio(double a, double b) { return b > 0 ? a / b : 0.0; }
}  // namespace

double NodeShareReport::node_share(NodeKind k) const {
  if (k == NodeKind::paper) return ratio(paper_nodes, nodes);
  const auto it = actor_nodes.find(k);
  return it == actor_nodes.end() ? 0.0 : ratio(static_cast<double>(it->second), nodes);
}

double NodeShareReport::edge_share(NodeKind k) const {
  const auto it = edges_by_kind.find(k);
  return it == edges_by_kind.end() ? 0.0 : ratio(static_cast<double>(it->second), edges);
}

double NodeShareReport::mention_share(NodeKind k) const {
  const auto it = weight_by_kind.find(k);
  return it == weight_by_kind.end() ? 0.0
                                    : ratio(static_cast<double>(it->second), static_cast<double>(weight));
}

std::string NodeShareReport::to_text() const {
  std::string out = "nodes=" + std::to_string(nodes) + "\nedges=" + std::to_string(edges) +
                    "\nmentions=" + std::to_string(weight) + "\npaper_node_share=" +
                    util::format_fixed(node_share(NodeKind::paper), 4) + "\n";
  for (auto k : {NodeKind::twitter, NodeKind::news, NodeKind::policy, NodeKind::other}) {
    const std::string t(token(k));
    out += t + "_actor_share=" + util::format_fixed(node_share(k), 4) + "\n";
    out += t + "_edge_share=" + util::format_fixed(edge_share(k), 4) + "\n";
    out += t + "_mention_share=" + util::format_fixed(mention_share(k), 4) + "\n";
  }
  return out;
}

NodeShareReport node_shares(const AttentionGraph& graph) {
  NodeShareReport r;
  r.nodes = graph.node_count();
  for (const auto& n : graph.nodes()) {
    if (n.is_paper()) {
      ++r.paper_nodes;
    } else {
      ++r.actor_nodes[n.kind];
    }
  }
  r.edges = graph.edges().size();
  for (const auto& e : graph.edges()) {
    const auto k = graph.nodes()[e.actor].kind;
    ++r.edges_by_kind[k];
    r.weight_by_kind[k] += e.weight;
    r.weight += e.weight;
  }
  return r;
}

// ---------------------------------------------------------------------------

double ActorDistribution::share_at(std::size_t k) const {
  const auto it = histogram.find(k);
  if (it == histogram.end() || total_actors == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_actors);
}

std::string ActorDistribution::to_csv() const {
  std::string out = "# actors=" + std::to_string(total_actors) +
                    " mean=" + (mean ? util::format_double(*mean) : "NA") +
                    " sd=" + (standard_deviation ? util::format_double(*standard_deviation) : "NA") +
                    "\ndistinct_papers,actors,share\n";
  for (const auto& [k, count] : histogram) {
    out += std::to_string(k) + "," + std::to_string(count) + "," +
           util::format_fixed(100.0 * share_at(k), 2) + "\n";
  }
  return out;
}

ActorDistribution actor_distribution(const AttentionGraph& graph, ActorClass cls) {
  const NodeKind kind = node_kind_of(cls);
  std::vector<std::size_t> distinct(graph.node_count(), 0);
  for (const auto& e : graph.edges()) ++distinct[e.actor];

  ActorDistribution d;
  std::vector<double> values;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (graph.nodes()[i].kind != kind) continue;
    ++d.histogram[distinct[i]];
    values.push_back(static_cast<double>(distinct[i]));
  }
  d.total_actors = values.size();
  if (values.empty()) return d;

  // Two-pass mean/variance.
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  d.mean = mean;
  d.standard_deviation = std::sqrt(ss / static_cast<double>(values.size()));
  return d;
}

// ---------------------------------------------------------------------------

AttentionGraph filter_for_display(const AttentionGraph& graph, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::InvalidFraction, "fraction must lie in (0, 1]");
  }
  const std::size_t n = graph.node_count();
  if (n == 0) return graph;

  // 1e-9 absorbs binary representation error, e.g. 0.06 * 100.
  const auto keep = std::max<std::size_t>(
      1, std::min<std::size_t>(n, static_cast<std::size_t>(
                                      std::ceil(fraction * static_cast<double>(n) - 1e-9))));

  const auto degree = graph.weighted_degrees();
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  // Nodes are stored in id order, so index order is the id tie-break.
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  std::vector<bool> kept(n, false);
  for (std::size_t r = 0; r < keep; ++r) kept[rank[r]] = true;

  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : graph.edges()) {
    if (kept[e.actor] && kept[e.paper]) {
      adj[e.actor].push_back(e.paper);
      adj[e.paper].push_back(e.actor);
    }
  }
  std::vector<bool> in_component(n, false);
  std::vector<std::size_t> stack = {rank[0]};
  in_component[rank[0]] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (const auto v : adj[u]) {
      if (!in_component[v]) {
        in_component[v] = true;
        stack.push_back(v);
      }
    }
  }

  std::vector<AttentionNode> nodes;
  std::vector<std::size_t> remap(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_component[i]) {
      remap[i] = nodes.size();
      nodes.push_back(graph.nodes()[i]);
    }
  }
  std::vector<AttentionEdge> edges;
  for (const auto& e : graph.edges()) {
    if (in_component[e.actor] && in_component[e.paper]) {
      edges.push_back({remap[e.actor], remap[e.paper], e.weight});
    }
  }
  return AttentionGraph(std::move(nodes), std::move(edges));
}

WeightedGraph project_comention(const AttentionGraph& graph, ProjectionSide side) {
  const bool papers = side == ProjectionSide::papers;
  std::vector<std::size_t> local(graph.node_count(), 0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (graph.nodes()[i].is_paper() == papers) {
      local[i] = names.size();
      names.push_back(graph.nodes()[i].id);
    }
  }

  // Group same-side endpoints by their opposite-side node.
  std::vector<std::vector<std::size_t>> by_hub(graph.node_count());
  for (const auto& e : graph.edges()) {
    const auto hub = papers ? e.actor : e.paper;
    const auto member = papers ? e.paper : e.actor;
    by_hub[hub].push_back(local[member]);
  }
  std::map<std::pair<std::size_t, std::size_t>, double> overlap;
  for (auto& list : by_hub) {
    std::sort(list.begin(), list.end());
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) overlap[{list[a], list[b]}] += 1.0;
    }
  }
  WeightedGraph g(std::move(names));
  for (const auto& [key, w] : overlap) g.add_edge(key.first, key.second, w);
  g.finalize();
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        // XML 1.0 forbids most control characters.
        out += (c < 0x20 && c != '\t') ? ' ' : static_cast<char>(c);
    }
  }
  return out;
}

NodeKind kind_from_id(const std::string& id) {
  for (auto k : {NodeKind::twitter, NodeKind::news, NodeKind::policy, NodeKind::other}) {
    const std::string prefix = std::string(token(k)) + ":";
    if (id.compare(0, prefix.size(), prefix) == 0) return k;
  }
  return NodeKind::paper;
}

[[noreturn]] void bad_graph(const std::string& why) { throw Error(ErrorKind::MalformedRecord, why); }

std::uint64_t parse_weight(const std::string& text) {
  std::size_t used = 0;
  unsigned long long w = 0;
  try {
    w = std::stoull(text, &used);
  } catch (...) {
    bad_graph("bad edge weight '" + text + "'");
  }
  if (used != text.size() || w == 0) bad_graph("bad edge weight '" + text + "'");
  return w;
}

}  // namespace

std::string to_graphml(const AttentionGraph& graph) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      "  <graph id=\"attention\" edgedefault=\"undirected\">\n";
  for (const auto& n : graph.nodes()) {
    out += "    <node id=\"" + xml_escape(n.id) + "\"><data key=\"kind\">" +
           std::string(token(n.kind)) + "</data><data key=\"label\">" + xml_escape(n.label) +
           "</data></node>\n";
  }
  for (const auto& e : graph.edges()) {
    out += "    <edge source=\"" + xml_escape(graph.nodes()[e.actor].id) + "\" target=\"" +
           xml_escape(graph.nodes()[e.paper].id) + "\"><data key=\"weight\">" +
           std::to_string(e.weight) + "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string to_edgelist(const AttentionGraph& graph) {
  std::string out = "source\ttarget\tweight\n";
  for (const auto& e : graph.edges()) {
    out += graph.nodes()[e.actor].id + "\t" + graph.nodes()[e.paper].id + "\t" +
           std::to_string(e.weight) + "\n";
  }
  return out;
}

AttentionGraph from_graphml(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    bad_graph(std::string("GraphML parse error: ") + e.what());
  }
  const auto graphml = tree.get_child_optional("graphml");
  if (!graphml) bad_graph("missing <graphml> root");
  const auto g = graphml->get_child_optional("graph");
  if (!g) bad_graph("missing <graph> element");

  // Map key ids to attribute names so files using other key ids still load.
  std::map<std::string, std::string> key_name;
  for (const auto& [tag, child] : *graphml) {
    if (tag != "key") continue;
    key_name[child.get<std::string>("<xmlattr>.id", "")] =
        child.get<std::string>("<xmlattr>.attr.name", child.get<std::string>("<xmlattr>.id", ""));
  }
  const auto data_of = [&](const pt::ptree& element) {
    std::map<std::string, std::string> data;
    for (const auto& [tag, child] : element) {
      if (tag != "data") continue;
      const auto key = child.get<std::string>("<xmlattr>.key", "");
      const auto it = key_name.find(key);
      data[it == key_name.end() ? key : it->second] = child.get_value<std::string>();
    }
    return data;
  };

  std::vector<AttentionNode> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> raw_edges;
  for (const auto& [tag, child] : *g) {
    if (tag == "node") {
      AttentionNode n;
      n.id = child.get<std::string>("<xmlattr>.id", "");
      if (n.id.empty()) bad_graph("node without id");
      const auto data = data_of(child);
      if (const auto it = data.find("kind"); it != data.end()) {
        const auto k = node_kind_from_token(it->second);
        if (!k) bad_graph("unknown node kind '" + it->second + "'");
        n.kind = *k;
      } else {
        n.kind = kind_from_id(n.id);
      }
      if (const auto it = data.find("label"); it != data.end()) n.label = it->second;
      if (!index.try_emplace(n.id, nodes.size()).second) bad_graph("duplicate node '" + n.id + "'");
      nodes.push_back(std::move(n));
    } else if (tag == "edge") {
      const auto data = data_of(child);
      const auto it = data.find("weight");
      raw_edges.emplace_back(child.get<std::string>("<xmlattr>.source", ""),
                             child.get<std::string>("<xmlattr>.target", ""),
                             it == data.end() ? 1 : parse_weight(it->second));
    }
  }

  std::vector<AttentionEdge> edges;
  for (const auto& [s, t, w] : raw_edges) {
    const auto si = index.find(s);
    const auto ti = index.find(t);
    if (si == index.end() || ti == index.end()) bad_graph("edge references unknown node");
    auto a = si->second;
    auto p = ti->second;
    if (nodes[a].is_paper()) std::swap(a, p);
    edges.push_back({a, p, w});
  }
  return AttentionGraph(std::move(nodes), std::move(edges));
}

AttentionGraph from_edgelist(std::string_view text) {
  std::vector<AttentionNode> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<AttentionEdge> edges;
  const auto node_for = [&](const std::string& id) {
    const auto [it, inserted] = index.try_emplace(id, nodes.size());
    if (inserted) {
      const auto kind = kind_from_id(id);
      nodes.push_back({id, kind, kind == NodeKind::paper ? id : id.substr(id.find(':') + 1)});
    }
    return it->second;
  };
  bool header = true;
  for (auto line : util::split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (util::trim(line).empty()) continue;
    if (header) {
      header = false;
      if (line == "source\ttarget\tweight") continue;
    }
    const auto cols = util::split(line, '\t');
    if (cols.size() != 3) bad_graph("edge list rows need 3 tab-separated columns");
    auto a = node_for(std::string(cols[0]));
    auto p = node_for(std::string(cols[1]));
    if (nodes[a].is_paper()) std::swap(a, p);
    edges.push_back({a, p, parse_weight(std::string(cols[2]))});
  }
  return AttentionGraph(std::move(nodes), std::move(edges));
}

void export_graph(const AttentionGraph& graph, GraphFormat format, const std::string& path) {
  util::write_file(path, format == GraphFormat::graphml ? to_graphml(graph) : to_edgelist(graph));
}

AttentionGraph import_graph(const std::string& path, GraphFormat format) {
  const auto text = util::read_file(path);
  return format == GraphFormat::graphml ? from_graphml(text) : from_edgelist(text);
}

}  // namespace altmap
