// Shared fixtures, generators and independent oracles for the test binaries.
#pragma once

#include "altmap/community.hpp"
#include "altmap/corpus.hpp"
#include "altmap/graph.hpp"
#include "altmap/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using namespace altmap;

inline MentionRecord mention(std::string id, PlatformKind platform, std::string actor, std::string_view doi,
                             std::string_view when = "2017-01-15T00:00:00Z") {
  MentionRecord m;
  m.mention_id = std::move(id);
  m.platform = platform;
  m.actor_id = actor;
  m.actor_name = std::move(actor);
  m.doi = normalize_doi(doi);
  m.timestamp = *parse_rfc3339(when);
  return m;
}

inline PublicationRecord publication(std::string_view doi, std::string title, int year = 2016) {
  PublicationRecord p;
  if (!doi.empty()) p.doi = normalize_doi(doi);
  p.title = std::move(title);
  p.year = year;
  p.source = "Journal";
  return p;
}

inline std::string doi_of(std::size_t i) { return "10.9999/p" + std::to_string(i); }

// Small deterministic generator wrapper with helpers.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 rng_;
};

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "virus", "bacteria", "gut", "microbiome", "vaccine", "resistance", "antibiotic", "zika",
      "outbreak", "yeast", "biofilm", "phage", "soil", "malaria", "genome", "infection",
  };
  return words;
}

inline std::string random_title(Gen& g, std::size_t max_words = 6) {
  static const std::vector<std::string> glue = {"of", "in", "and", "the", ":", ","};
  std::string t;
  const std::size_t n = 1 + g.below(max_words);
  for (std::size_t i = 0; i < n; ++i) {
    if (!t.empty()) t += ' ';
    t += g.chance(0.25) ? g.pick(glue) : g.pick(vocabulary());
  }
  return t;
}

struct RandomCorpus {
  std::vector<PublicationRecord> pubs;
  std::vector<MentionRecord> mentions;
};

// Publications 0..n_pubs-1 (some without DOI), mentions over random platforms,
// actors and months; a few mentions target unknown DOIs.
inline RandomCorpus random_corpus(Gen& g, std::size_t n_pubs, std::size_t n_mentions,
                                  std::size_t n_actors = 12) {
  RandomCorpus c;
  for (std::size_t i = 0; i < n_pubs; ++i) {
    c.pubs.push_back(publication(g.chance(0.9) ? doi_of(i) : "", random_title(g), 2012 + int(i % 7)));
  }
  for (std::size_t k = 0; k < n_mentions; ++k) {
    const auto platform = kAllPlatforms[g.chance(0.6) ? 0 : g.below(kPlatformCount)];
    const std::size_t target = g.chance(0.05) ? n_pubs + g.below(5) : g.below(n_pubs);
    char when[32];
    std::snprintf(when, sizeof when, "%04zu-%02zu-%02zuT%02zu:00:00Z", 2016 + g.below(3), 1 + g.below(12),
                  1 + g.below(28), g.below(24));
    auto m = mention("m" + std::to_string(k), platform, "actor" + std::to_string(g.below(n_actors)),
                     doi_of(target), when);
    c.mentions.push_back(std::move(m));
  }
  return c;
}

// Dense adjacency straight from the edge insertions, for oracles.
struct DenseGraph {
  std::size_t n = 0;
  std::vector<double> a;  // row-major, symmetric; self-loop {u,u,w} stored as 2w
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct EdgeSpec {
  std::size_t u, v;
  double w;
};

inline WeightedGraph make_graph(std::size_t n, const std::vector<EdgeSpec>& edges) {
  WeightedGraph g(n);
  for (const auto& e : edges) g.add_edge(e.u, e.v, e.w);
  g.finalize();
  return g;
}

inline DenseGraph make_dense(std::size_t n, const std::vector<EdgeSpec>& edges) {
  DenseGraph d{n, std::vector<double>(n * n, 0.0)};
  for (const auto& e : edges) {
    if (e.u == e.v) {
      d.a[e.u * n + e.u] += 2 * e.w;
    } else {
      d.a[e.u * n + e.v] += e.w;
      d.a[e.v * n + e.u] += e.w;
    }
  }
  return d;
}

// Modularity straight from the definition, summed over all ordered pairs.
inline double dense_modularity(const DenseGraph& d, const std::vector<std::size_t>& c, double gamma = 1.0) {
  std::vector<double> k(d.n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    for (std::size_t j = 0; j < d.n; ++j) k[i] += d.at(i, j);
    two_m += k[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    for (std::size_t j = 0; j < d.n; ++j) {
      if (c[i] == c[j]) q += d.at(i, j) - gamma * k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Calls f on every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> mx(n, 0);  // mx[i] = max(a[0..i-1]) + 1
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      f(a);
      return;
    }
    for (std::size_t v = 0; v <= blocks && v < n; ++v) {
      a[i] = v;
      rec(i + 1, std::max(blocks, v + 1));
    }
  };
  if (n == 0) return;
  a[0] = 0;
  rec(1, 1);
}

inline double exhaustive_best_q(const DenseGraph& d, double gamma = 1.0) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_partition(d.n, [&](const std::vector<std::size_t>& c) { best = std::max(best, dense_modularity(d, c, gamma)); });
  return best;
}

inline std::vector<EdgeSpec> random_edges(Gen& g, std::size_t n, double density, bool integer_weights) {
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.chance(density)) {
        edges.push_back({i, j, integer_weights ? double(1 + g.below(5)) : g.uniform(0.1, 3.0)});
      }
    }
  }
  return edges;
}

inline std::vector<EdgeSpec> two_k5_bridge() {
  std::vector<EdgeSpec> e;
  for (std::size_t base : {0u, 5u}) {
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) e.push_back({base + i, base + j, 1.0});
    }
  }
  e.push_back({4, 5, 1.0});
  return e;
}

// True when two assignments describe the same set partition.
inline bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

// Top Twitter accounts with (papers, mentions, type, lifetime posts, following).
struct AccountRow {
  std::string name;
  std::size_t papers;
  std::uint64_t mentions;
  std::string type;
  std::uint64_t posts;
  std::uint64_t following;
};

inline const std::vector<AccountRow>& top_accounts() {
  static const std::vector<AccountRow> rows = {
      {"@AntibioticResis", 6497, 7699, "bot", 27300, 931},
      {"@yeast_papers", 6147, 6342, "bot", 33300, 3},
      {"@rnomics", 3863, 6218, "bot", 16200, 119},
      {"@jcamthrash", 5441, 5689, "academic", 19900, 489},
      {"@FrontMicrobiol", 5007, 5290, "journal", 7222, 816},
      {"@EvolvedBiofilm", 3898, 4940, "academic", 29300, 1156},
      {"@msmjjetten", 2948, 4929, "academic", 35800, 507},
      {"@micro_papers", 4448, 4587, "bot", 12200, 11},
      {"@MicrobiomePaper", 4218, 4465, "bot", 19800, 53},
      {"@biofilmPapers", 4305, 4416, "bot", 14000, 64},
      {"@pseudo_papers", 4030, 4048, "bot", 16400, 35},
      {"@ndm1bacteria", 3221, 3981, "press", 15500, 49},
      {"@PLOSPathogens", 2610, 3978, "journal", 6601, 2530},
      {"@Immunol_papers", 2920, 3969, "bot", 61700, 0},
      {"@animesh1977", 3129, 3962, "professional", 954, 1059},
      {"@phy_papers", 3906, 3946, "bot", 20800, 1},
      {"@custom_ms", 3777, 3865, "bot", 11100, 2},
      {"@BIOCIENCIA2013", 3192, 3717, "academic", 67200, 565},
      {"@MicrobiomDigest", 3356, 3597, "academic", 34000, 15100},
      {"@bmgphd", 2636, 3589, "academic", 8375, 228},
      {"@FarmFairyCrafts", 5, 3578, "company", 755, 20700},
      {"@ASMicrobiology", 2895, 3251, "academic", 18900, 218},
      {"@BioinformaticsP", 3052, 3062, "bot", 4865, 27},
      {"@NatureRevMicro", 2686, 3059, "journal", 10300, 1340},
      {"@transcriptomes", 2638, 2804, "bot", 21300, 4},
  };
  return rows;
}

// Every row's actor tweets papers 0..papers-1 once, then repeats from paper 0
// until its mention count is reached. Mentions are shuffled by `g`.
inline LinkedCorpus top_accounts_corpus(Gen& g) {
  std::size_t n_pubs = 0;
  for (const auto& r : top_accounts()) n_pubs = std::max(n_pubs, r.papers);
  std::vector<PublicationRecord> pubs;
  for (std::size_t i = 0; i < n_pubs; ++i) pubs.push_back(publication(doi_of(i), "paper"));
  std::vector<MentionRecord> ms;
  for (const auto& r : top_accounts()) {
    for (std::uint64_t k = 0; k < r.mentions; ++k) {
      auto m = mention(r.name + "/" + std::to_string(k), PlatformKind::tweet, r.name, doi_of(k % r.papers));
      m.actor_meta = {{"following_count", std::to_string(r.following)},
                      {"lifetime_post_count", std::to_string(r.posts)}};
      ms.push_back(std::move(m));
    }
  }
  std::shuffle(ms.begin(), ms.end(), g.engine());
  return link_corpus(std::move(pubs), std::move(ms));
}

}  // namespace testsupport
