#include "altmap/error.hpp"
#include "altmap/termmap.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace altmap;
using namespace testsupport;

namespace {

TermExtractionConfig config(std::size_t min_occ = 1) {
  TermExtractionConfig c;
  c.min_occurrences = min_occ;
  return c;
}

std::vector<std::string> surfaces(const std::vector<Term>& terms) {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.surface);
  return out;
}

double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

}  // namespace

TEST_CASE("title_chunks: stopwords, numbers and punctuation break chunks") {
  const auto& sw = default_stopwords();
  using Chunks = std::vector<std::vector<std::string>>;
  CHECK(title_chunks("Gut Microbiome of the Honey Bee", sw) == Chunks{{"gut", "microbiome"}, {"honey", "bee"}});
  CHECK(title_chunks("Zika virus: 2016 outbreak", sw) == Chunks{{"zika", "virus"}, {"outbreak"}});
  CHECK(title_chunks("drug-resistant strains, host's response", sw) ==
        Chunks{{"drug-resistant", "strains"}, {"host's", "response"}});
  CHECK(title_chunks("", sw).empty());
  CHECK(title_chunks("of the and", sw).empty());
}

TEST_CASE("extract_terms: binary counting per title") {
  const std::vector<std::string> one = {"gut microbiome gut microbiome"};
  const auto t = extract_terms(one, config());
  const auto it = std::find_if(t.begin(), t.end(), [](const Term& x) { return x.surface == "gut microbiome"; });
  REQUIRE(it != t.end());
  CHECK(it->doc_frequency == 1);
  for (const auto& term : t) CHECK(term.doc_frequency == 1);

  const std::vector<std::string> two = {"x y", "x z"};
  CHECK(extract_terms(two, config()) == std::vector<Term>{{"x", 2}, {"x y", 1}, {"x z", 1}, {"y", 1}, {"z", 1}});
  CHECK(extract_terms(two, config(2)) == std::vector<Term>{{"x", 2}});
  CHECK(extract_terms(two, config(3)).empty());
}

TEST_CASE("extract_terms: max_terms keeps the most frequent") {
  const std::vector<std::string> titles = {"alpha beta", "alpha gamma", "alpha beta", "delta"};
  auto c = config();
  c.max_phrase_len = 1;
  c.max_terms = 2;
  CHECK(surfaces(extract_terms(titles, c)) == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("extract_terms: doc frequency matches a direct count") {
  Gen g(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> titles;
    for (std::size_t i = 0, n = 1 + g.below(25); i < n; ++i) titles.push_back(random_title(g));
    const auto cfg = config(1 + g.below(3));
    const auto terms = extract_terms(titles, cfg);
    CHECK(std::is_sorted(terms.begin(), terms.end(), [](auto& a, auto& b) { return a.surface < b.surface; }));
    std::map<std::string, std::size_t> df;
    for (const auto& t : titles) {
      for (const auto& p : title_phrases(t, cfg)) ++df[p];
    }
    std::vector<Term> expected;
    for (const auto& [p, k] : df) {
      if (k >= cfg.min_occurrences) expected.push_back({p, k});
    }
    CHECK(terms == expected);
  }
}

TEST_CASE("build_cooccurrence: hand example") {
  const std::vector<std::string> titles = {"a b", "a b", "a c"};
  auto cfg = config();
  cfg.stopwords = {};
  cfg.max_phrase_len = 1;
  const auto terms = extract_terms(titles, cfg);
  const auto co = build_cooccurrence(terms, titles, cfg);
  const auto a = *co.find("a"), b = *co.find("b"), c = *co.find("c");
  CHECK(co.count(a, b) == 2);
  CHECK(co.count(b, a) == 2);
  CHECK(co.count(a, c) == 1);
  CHECK(co.count(b, c) == 0);
  CHECK(co.occurrences[a] == 3);
  CHECK(co.total_pairs == 3);

  const auto s = association_strength(co);
  CHECK(s.at(a, b) == doctest::Approx(2.0 / 6.0));
  CHECK(s.at(a, c) == doctest::Approx(1.0 / 3.0));
  CHECK(s.at(b, c) == 0.0);
}

TEST_CASE("build_cooccurrence: counts match a brute-force oracle") {
  Gen g(44);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::string> titles;
    for (std::size_t i = 0, n = 2 + g.below(20); i < n; ++i) titles.push_back(random_title(g));
    const auto cfg = config();
    const auto terms = extract_terms(titles, cfg);
    const auto co = build_cooccurrence(terms, titles, cfg);
    std::vector<std::set<std::string>> sets;
    for (const auto& t : titles) {
      const auto p = title_phrases(t, cfg);
      sets.emplace_back(p.begin(), p.end());
    }
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      CHECK(co.occurrences[i] == terms[i].doc_frequency);
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        std::uint64_t c = 0;
        for (const auto& s : sets) c += s.contains(terms[i].surface) && s.contains(terms[j].surface);
        CHECK(co.count(i, j) == c);
        CHECK(c <= std::min(co.occurrences[i], co.occurrences[j]));
        m += c;
      }
    }
    CHECK(co.total_pairs == m);

    // Doubling a phrase inside every title changes nothing.
    std::vector<std::string> doubled;
    for (const auto& t : titles) doubled.push_back(t + " . " + t);
    const auto co2 = build_cooccurrence(terms, doubled, cfg);
    CHECK(co2.pairs == co.pairs);

    // Nor does the title order.
    auto shuffled = titles;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    CHECK(build_cooccurrence(terms, shuffled, cfg).pairs == co.pairs);

    const auto s = association_strength(co);
    for (const auto& e : s.entries) {
      CHECK(e.value == doctest::Approx(double(co.count(e.i, e.j)) /
                                       (double(co.occurrences[e.i]) * double(co.occurrences[e.j]))));
    }
  }
}

TEST_CASE("largest_connected_terms picks the biggest component") {
  const std::vector<std::string> titles = {"alpha beta", "beta gamma", "delta epsilon"};
  auto cfg = config();
  cfg.max_phrase_len = 1;
  const auto terms = extract_terms(titles, cfg);
  const auto co = build_cooccurrence(terms, titles, cfg);
  const auto keep = largest_connected_terms(co);
  std::vector<std::string> kept;
  for (auto i : keep) kept.push_back(co.terms[i].surface);
  CHECK(kept == std::vector<std::string>{"alpha", "beta", "gamma"});
  const auto r = restrict_terms(co, keep);
  CHECK(r.terms.size() == 3);
  CHECK(r.total_pairs == 2);
}

TEST_CASE("layout: two and three terms") {
  const auto two = layout(dense_similarity(2, {0.7}), {});
  CHECK(distance(two.coordinates[0], two.coordinates[1]) == doctest::Approx(1.0));
  CHECK(two.objective == doctest::Approx(0.7));

  // The objective is flat to second order around the triangle, so side
  // lengths converge like the square root of the stopping tolerance.
  LayoutParams tight;
  tight.tolerance = 1e-14;
  tight.max_iterations = 100000;
  const auto tri = layout(dense_similarity(3, {1.0, 1.0, 1.0}), tight);
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    CHECK(distance(tri.coordinates[i], tri.coordinates[j]) == doctest::Approx(1.0).epsilon(1e-5));
  }
  CHECK(tri.objective == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("layout: degenerate inputs") {
  CHECK_THROWS_AS(layout(dense_similarity(1, {}), {}), Error);
  CHECK_THROWS_AS(layout(dense_similarity(4, {1, 0, 0, 0, 0, 1}), {}), Error);
  CHECK_THROWS_AS(layout(dense_similarity(2, {-1.0}), {}), Error);
}

TEST_CASE("layout: monotone, constrained, centered, stationary") {
  Gen g(5);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 3 + g.below(10);
    const auto s = random_similarity(g, n);
    LayoutParams p;
    p.seed = trial;
    p.max_iterations = 20000;
    p.tolerance = 1e-13;
    const auto r = layout(s, p);
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
      CHECK(r.objective_trace[k] <= r.objective_trace[k - 1] * (1 + 1e-12));
    }
    CHECK(std::abs(r.constraint_residual) < 1e-6);
    CHECK(std::abs(mean_pairwise_distance(r.coordinates) - 1.0) < 1e-6);
    CHECK(r.objective == doctest::Approx(layout_objective(s, r.coordinates)));
    double cx = 0, cy = 0;
    for (const auto& pt : r.coordinates) {
      cx += pt[0];
      cy += pt[1];
    }
    CHECK(std::abs(cx / double(n)) < 1e-9);
    CHECK(std::abs(cy / double(n)) < 1e-9);

    CHECK(projected_gradient_norm(s, r.coordinates) < 1e-4);
  }
}

TEST_CASE("layout: scaling similarities leaves the map unchanged") {
  Gen g(9);
  for (int trial = 0; trial < 8; ++trial) {
    const auto s = random_similarity(g, 4 + g.below(8));
    LayoutParams p;
    p.seed = 3;
    const auto a = layout(s, p);
    const auto b = layout(s.scaled(10.0), p);
    CHECK(procrustes_rms(a.coordinates, b.coordinates) < 1e-6);
    CHECK(b.objective == doctest::Approx(10.0 * a.objective).epsilon(1e-6));
  }
}

TEST_CASE("layout objective is invariant under rigid motions") {
  Gen g(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + g.below(10);
    const auto s = random_similarity(g, n);
    std::vector<Point> pts(n), moved(n);
    const double th = g.uniform(0, 6.3), tx = g.uniform(-5, 5), ty = g.uniform(-5, 5);
    const bool flip = g.chance(0.5);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i] = {g.uniform(-1, 1), g.uniform(-1, 1)};
      const double y = flip ? -pts[i][1] : pts[i][1];
      moved[i] = {std::cos(th) * pts[i][0] - std::sin(th) * y + tx, std::sin(th) * pts[i][0] + std::cos(th) * y + ty};
    }
    CHECK(layout_objective(s, moved) == doctest::Approx(layout_objective(s, pts)).epsilon(1e-12));
    CHECK(mean_pairwise_distance(moved) == doctest::Approx(mean_pairwise_distance(pts)).epsilon(1e-12));
  }
}

TEST_CASE("cluster_map: disjoint and shared vocabularies") {
  auto cfg = config();
  cfg.max_phrase_len = 1;
  ModularityParams mp;
  {
    const std::vector<std::string> titles = {"virus vaccine", "vaccine outbreak", "virus outbreak",
                                             "soil yeast", "yeast biofilm", "soil biofilm"};
    const auto terms = extract_terms(titles, cfg);
    const auto part = cluster_map(build_cooccurrence(terms, titles, cfg), mp);
    CHECK(part.community_count == 2);
    const auto co = build_cooccurrence(terms, titles, cfg);
    CHECK(part.assignment[*co.find("virus")] == part.assignment[*co.find("outbreak")]);
    CHECK(part.assignment[*co.find("virus")] != part.assignment[*co.find("soil")]);
  }
  {
    const std::vector<std::string> titles = {"virus vaccine outbreak", "virus vaccine outbreak"};
    const auto terms = extract_terms(titles, cfg);
    CHECK(cluster_map(build_cooccurrence(terms, titles, cfg), mp).community_count == 1);
  }
}

TEST_CASE("build_term_map: deterministic and parse-back stable") {
  Gen g(21);
  std::vector<std::string> titles;
  for (int i = 0; i < 60; ++i) titles.push_back(random_title(g));
  TermMapConfig cfg;
  cfg.extraction.min_occurrences = 2;
  cfg.layout.seed = 4;
  cfg.clustering.seed = 4;
  const auto a = build_term_map(titles, cfg);
  const auto b = build_term_map(titles, cfg);
  CHECK(a.to_csv() == b.to_csv());
  REQUIRE(a.rows.size() >= 2);
  const auto parsed = TermMap::from_csv(a.to_csv());
  CHECK(parsed.to_csv() == a.to_csv());
  CHECK(a.to_csv().rfind("term,doc_frequency,x,y,cluster\n", 0) == 0);
  CHECK_THROWS_AS(TermMap::from_csv("term,doc_frequency,x,y,cluster\nfoo,bar,1,2,0\n"), Error);

  const std::vector<std::string> lonely = {"virus", "soil"};
  CHECK_THROWS_AS(build_term_map(lonely, cfg), Error);
}
