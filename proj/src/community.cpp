#include "altmap/community.hpp"

#include "altmap/error.hpp"
#include "altmap/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace altmap {

void ModularityParams::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorKind::InvalidConfig, "resolution must be > 0");
  }
  if (!(min_improvement >= 0.0)) throw Error(ErrorKind::InvalidConfig, "min_improvement must be >= 0");
  if (max_iterations == 0) throw Error(ErrorKind::InvalidConfig, "max_iterations must be >= 1");
  if (random_starts == 0) throw Error(ErrorKind::InvalidConfig, "random_starts must be >= 1");
}

double modularity(const WeightedGraph& graph, std::span<const std::size_t> assignment,
                  double resolution) {
  const std::size_t n = graph.node_count();
  if (assignment.size() != n) throw Error(ErrorKind::DegenerateInput, "assignment size mismatch");
  // Communities are summed in order of their lowest member, so relabeling
  // cannot change the rounding.
  std::size_t upper = 0;
  for (auto c : assignment) upper = std::max(upper, c + 1);
  std::vector<std::size_t> order(upper, std::numeric_limits<std::size_t>::max());
  std::size_t groups = 0;
  for (auto c : assignment) {
    if (order[c] == std::numeric_limits<std::size_t>::max()) order[c] = groups++;
  }

  std::vector<double> internal(groups, 0.0);
  std::vector<double> total(groups, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Summed in the same order as the degree so that a single community gives
    // internal == total == 2m bit for bit.
    double k = graph.self_weight(i);
    double in = graph.self_weight(i);
    for (const auto& nb : graph.neighbors(i)) {
      k += nb.weight;
      if (assignment[nb.node] == assignment[i]) in += nb.weight;
    }
    internal[order[assignment[i]]] += in;
    total[order[assignment[i]]] += k;
    two_m += k;
  }
  if (two_m == 0.0) throw Error(ErrorKind::EmptyGraph, "graph has no edge weight");

  double q = 0.0;
  for (std::size_t c = 0; c < groups; ++c) {
    q += internal[c] / two_m - resolution * (total[c] / two_m) * (total[c] / two_m);
  }
  return q;
}

namespace {

// Compressed adjacency used by the optimizer. Node weight is the weighted
// degree in the original graph (aggregates sum their members).
struct Network {
  std::size_t n = 0;
  std::vector<std::size_t> first;  // size n + 1
  std::vector<std::size_t> neighbor;
  std::vector<double> weight;
  std::vector<double> node_weight;
  std::vector<double> self;
};

Network from_graph(const WeightedGraph& g) {
  WeightedGraph copy = g;
  copy.finalize();
  Network net;
  net.n = copy.node_count();
  net.first.assign(net.n + 1, 0);
  net.node_weight.resize(net.n);
  net.self.resize(net.n);
  for (std::size_t i = 0; i < net.n; ++i) {
    net.first[i] = net.neighbor.size();
    for (const auto& nb : copy.neighbors(i)) {
      if (nb.weight < 0.0) throw Error(ErrorKind::DegenerateInput, "negative edge weight");
      net.neighbor.push_back(nb.node);
      net.weight.push_back(nb.weight);
    }
    net.self[i] = copy.self_weight(i);
    net.node_weight[i] = copy.degree(i);
  }
  net.first[net.n] = net.neighbor.size();
  return net;
}

struct Clustering {
  std::vector<std::size_t> cluster;
  std::size_t count = 0;

  static Clustering singletons(std::size_t n) {
    Clustering c;
    c.cluster.resize(n);
    std::iota(c.cluster.begin(), c.cluster.end(), std::size_t{0});
    c.count = n;
    return c;
  }

  // Renumbers to 0..count-1 keeping the relative order of ids.
  void compact() {
    std::size_t upper = 0;
    for (auto c : cluster) upper = std::max(upper, c + 1);
    std::vector<std::size_t> remap(upper, std::numeric_limits<std::size_t>::max());
    for (auto c : cluster) remap[c] = 0;
    count = 0;
    for (auto& r : remap) {
      if (r == 0) r = count++;
    }
    for (auto& c : cluster) c = remap[c];
  }
};

// Uniform integer in [0, bound); plain modulo keeps streams identical across
// standard libraries.
std::size_t draw(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[draw(rng, i)]);
  return perm;
}

// One local-moving pass to convergence. `scaled_resolution` is gamma / 2m of
// the top-level graph. Returns whether any node changed community.
bool local_moving(const Network& net, Clustering& clustering, double scaled_resolution,
                  std::mt19937_64& rng) {
  const std::size_t n = net.n;
  if (n <= 1) return false;

  std::vector<double> cluster_weight(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    cluster_weight[clustering.cluster[i]] += net.node_weight[i];
    ++members[clustering.cluster[i]];
  }
  std::vector<std::size_t> unused;
  for (std::size_t c = n; c-- > 0;) {
    if (members[c] == 0) unused.push_back(c);
  }

  const auto perm = random_permutation(n, rng);
  std::vector<double> edge_weight_to(n, 0.0);
  std::vector<std::size_t> touched;
  touched.reserve(n);

  bool update = false;
  std::size_t unstable = n;
  std::size_t pos = 0;
  // Guards against cycling on floating-point ties; far above what converging
  // runs need.
  std::size_t budget = n * 10000;
  while (unstable > 0 && budget-- > 0) {
    const std::size_t j = perm[pos];
    const std::size_t current = clustering.cluster[j];

    touched.clear();
    for (std::size_t e = net.first[j]; e < net.first[j + 1]; ++e) {
      const std::size_t l = clustering.cluster[net.neighbor[e]];
      if (edge_weight_to[l] == 0.0) touched.push_back(l);
      edge_weight_to[l] += net.weight[e];
    }

    cluster_weight[current] -= net.node_weight[j];
    if (--members[current] == 0) unused.push_back(current);

    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_gain = 0.0;
    for (const std::size_t l : touched) {
      const double gain = edge_weight_to[l] - net.node_weight[j] * cluster_weight[l] * scaled_resolution;
      if (gain > best_gain || (gain == best_gain && gain > 0.0 && l < best)) {
        best = l;
        best_gain = gain;
      }
      edge_weight_to[l] = 0.0;
    }
    if (best == std::numeric_limits<std::size_t>::max()) {
      best = unused.back();
    }
    if (!unused.empty() && unused.back() == best) unused.pop_back();

    cluster_weight[best] += net.node_weight[j];
    ++members[best];
    clustering.cluster[j] = best;

    if (best != current) {
      update = true;
      unstable = n;
    } else {
      --unstable;
    }
    pos = (pos + 1) % n;
  }
  clustering.compact();
  return update;
}

// Nodes of each cluster, in ascending node order.
std::vector<std::vector<std::size_t>> members_of(const Clustering& clustering) {
  std::vector<std::vector<std::size_t>> out(clustering.count);
  for (std::size_t i = 0; i < clustering.cluster.size(); ++i) out[clustering.cluster[i]].push_back(i);
  return out;
}

Network subnetwork(const Network& net, const std::vector<std::size_t>& nodes,
                   std::vector<std::size_t>& local_index) {
  Network sub;
  sub.n = nodes.size();
  sub.first.assign(sub.n + 1, 0);
  sub.node_weight.resize(sub.n);
  sub.self.assign(sub.n, 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) local_index[nodes[k]] = k;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::size_t i = nodes[k];
    sub.first[k] = sub.neighbor.size();
    sub.node_weight[k] = net.node_weight[i];
    sub.self[k] = net.self[i];
    for (std::size_t e = net.first[i]; e < net.first[i + 1]; ++e) {
      const std::size_t j = net.neighbor[e];
      const std::size_t lj = local_index[j];
      if (lj < nodes.size() && nodes[lj] == j) {
        sub.neighbor.push_back(lj);
        sub.weight.push_back(net.weight[e]);
      }
    }
  }
  sub.first[sub.n] = sub.neighbor.size();
  return sub;
}

Network aggregate(const Network& net, const Clustering& clustering) {
  Network red;
  red.n = clustering.count;
  red.first.assign(red.n + 1, 0);
  red.node_weight.assign(red.n, 0.0);
  red.self.assign(red.n, 0.0);

  const auto groups = members_of(clustering);
  std::vector<double> to(red.n, 0.0);
  std::vector<std::size_t> touched;
  for (std::size_t c = 0; c < red.n; ++c) {
    red.first[c] = red.neighbor.size();
    touched.clear();
    for (const std::size_t i : groups[c]) {
      red.node_weight[c] += net.node_weight[i];
      red.self[c] += net.self[i];
      for (std::size_t e = net.first[i]; e < net.first[i + 1]; ++e) {
        const std::size_t d = clustering.cluster[net.neighbor[e]];
        if (d == c) {
          red.self[c] += net.weight[e];
        } else {
          if (to[d] == 0.0) touched.push_back(d);
          to[d] += net.weight[e];
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const std::size_t d : touched) {
      red.neighbor.push_back(d);
      red.weight.push_back(to[d]);
      to[d] = 0.0;
    }
  }
  red.first[red.n] = red.neighbor.size();
  return red;
}

bool smart_local_moving(const Network& net, Clustering& clustering, double scaled_resolution,
                        std::mt19937_64& rng) {
  if (net.n <= 1) return false;
  bool update = local_moving(net, clustering, scaled_resolution, rng);
  if (clustering.count == net.n) return update;

  // Refine each community by local moving inside its own subnetwork.
  const auto groups = members_of(clustering);
  Clustering refined;
  refined.cluster.assign(net.n, 0);
  std::vector<std::size_t> parent;
  std::vector<std::size_t> local_index(net.n, std::numeric_limits<std::size_t>::max());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    const Network sub = subnetwork(net, groups[c], local_index);
    Clustering sub_clustering = Clustering::singletons(sub.n);
    local_moving(sub, sub_clustering, scaled_resolution, rng);
    for (std::size_t k = 0; k < groups[c].size(); ++k) {
      refined.cluster[groups[c][k]] = refined.count + sub_clustering.cluster[k];
    }
    for (std::size_t s = 0; s < sub_clustering.count; ++s) parent.push_back(c);
    refined.count += sub_clustering.count;
    for (const std::size_t i : groups[c]) local_index[i] = std::numeric_limits<std::size_t>::max();
  }

  // Aggregate on the refined communities, starting from the unrefined ones.
  const Network reduced = aggregate(net, refined);
  Clustering reduced_clustering;
  reduced_clustering.cluster = parent;
  reduced_clustering.count = clustering.count;
  update |= smart_local_moving(reduced, reduced_clustering, scaled_resolution, rng);

  for (std::size_t i = 0; i < net.n; ++i) {
    clustering.cluster[i] = reduced_clustering.cluster[refined.cluster[i]];
  }
  clustering.compact();
  return update;
}

// Quality in the optimizer's own terms; only used to compare clusterings of
// the same network.
double quality(const Network& net, const Clustering& clustering, double scaled_resolution) {
  double q = 0.0;
  std::vector<double> cluster_weight(clustering.count, 0.0);
  for (std::size_t i = 0; i < net.n; ++i) {
    q += net.self[i];
    for (std::size_t e = net.first[i]; e < net.first[i + 1]; ++e) {
      if (clustering.cluster[net.neighbor[e]] == clustering.cluster[i]) q += net.weight[e];
    }
    cluster_weight[clustering.cluster[i]] += net.node_weight[i];
  }
  for (const double w : cluster_weight) q -= w * w * scaled_resolution;
  return q;
}

// Dense ids by decreasing size, ties by lowest member index.
Partition finish(const WeightedGraph& graph, const Clustering& clustering,
                 const ModularityParams& params, bool has_edges) {
  const auto groups = members_of(clustering);
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (groups[a].size() != groups[b].size()) return groups[a].size() > groups[b].size();
    return groups[a].front() < groups[b].front();
  });
  Partition p;
  p.assignment.resize(graph.node_count());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    for (const std::size_t i : groups[order[rank]]) p.assignment[i] = rank;
  }
  p.community_count = groups.size();
  p.resolution = params.resolution;
  p.seed = params.seed;
  p.modularity = has_edges ? modularity(graph, p.assignment, params.resolution) : 0.0;
  return p;
}

}  // namespace

Partition detect_communities(const WeightedGraph& graph, const ModularityParams& params) {
  params.validate();
  if (graph.node_count() == 0) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  const Network net = from_graph(graph);
  double two_m = 0.0;
  for (const double w : net.node_weight) two_m += w;
  if (two_m == 0.0) return finish(graph, Clustering::singletons(net.n), params, false);

  const double scaled = params.resolution / two_m;
  std::mt19937_64 rng(params.seed);
  Clustering best;
  double best_quality = -std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start < params.random_starts; ++start) {
    // The first start is the classic one from singletons; later starts begin
    // from random partitions to reach other local optima.
    Clustering clustering = Clustering::singletons(net.n);
    if (start > 0) {
      const std::size_t k = 1 + draw(rng, net.n);
      for (auto& c : clustering.cluster) c = draw(rng, k);
      clustering.compact();
    }
    double q = quality(net, clustering, scaled);
    for (std::size_t it = 0; it < params.max_iterations; ++it) {
      const bool update = smart_local_moving(net, clustering, scaled, rng);
      const double next = quality(net, clustering, scaled);
      const double gain = (next - q) / two_m;
      q = next;
      if (!update || gain < params.min_improvement) break;
    }
    if (q > best_quality) {
      best_quality = q;
      best = clustering;
    }
  }
  return finish(graph, best, params, true);
}

Partition local_moving_baseline(const WeightedGraph& graph, const ModularityParams& params) {
  params.validate();
  if (graph.node_count() == 0) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  const Network net = from_graph(graph);
  double two_m = 0.0;
  for (const double w : net.node_weight) two_m += w;
  if (two_m == 0.0) return finish(graph, Clustering::singletons(net.n), params, false);
  std::mt19937_64 rng(params.seed);
  Clustering clustering = Clustering::singletons(net.n);
  local_moving(net, clustering, params.resolution / two_m, rng);
  return finish(graph, clustering, params, true);
}

std::vector<std::pair<std::size_t, std::size_t>> cluster_sizes(const Partition& partition) {
  std::size_t groups = 0;
  for (auto c : partition.assignment) groups = std::max(groups, c + 1);
  std::vector<std::pair<std::size_t, std::size_t>> sizes(groups);
  for (std::size_t c = 0; c < groups; ++c) sizes[c] = {c, 0};
  for (auto c : partition.assignment) ++sizes[c].second;
  std::sort(sizes.begin(), sizes.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return sizes;
}

std::string partition_csv(const WeightedGraph& graph, const Partition& partition) {
  std::string out = "# gamma=" + util::format_double(partition.resolution) +
                    " seed=" + std::to_string(partition.seed) +
                    " modularity=" + util::format_double(partition.modularity) + "\n";
  out += "node_id,community_id\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out += util::csv_field(graph.name(i)) + "," + std::to_string(partition.assignment[i]) + "\n";
  }
  return out;
}

}  // namespace altmap
