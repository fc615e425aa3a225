#pragma once

#include "altmap/community.hpp"
#include "altmap/corpus.hpp"
#include "altmap/graph.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace altmap {

using StopwordSet = std::unordered_set<std::string>;

/// The built-in English list (identical to data/stopwords_en.txt).
const StopwordSet& default_stopwords();
/// One token per line; blank lines and lines starting with '#' are skipped.
StopwordSet load_stopwords(const std::string& path);

struct TermExtractionConfig {
  std::size_t min_occurrences = 1;
  std::size_t max_phrase_len = 3;
  /// Keep only this many most frequent terms (ties by surface); 0 = all.
  std::size_t max_terms = 0;
  StopwordSet stopwords = default_stopwords();
};

/// Lowercased word tokens grouped into chunks. Chunks break at stopwords,
/// purely numeric tokens and punctuation other than intra-word '-' and '\''.
std::vector<std::vector<std::string>> title_chunks(std::string_view title,
                                                   const StopwordSet& stopwords);

/// Distinct candidate phrases of one title: every contiguous run of 1 to
/// max_phrase_len tokens inside a chunk, joined by single spaces. Sorted.
std::vector<std::string> title_phrases(std::string_view title, const TermExtractionConfig& config);

struct Term {
  std::string surface;
  std::size_t doc_frequency = 0;  // distinct titles containing the phrase

  friend bool operator==(const Term&, const Term&) = default;
};

/// Binary counting: a phrase counts once per title however often it repeats.
/// Result is sorted by surface.
std::vector<Term> extract_terms(std::span<const std::string> titles,
                                const TermExtractionConfig& config);

struct PairCount {
  std::size_t i;  // i < j
  std::size_t j;
  std::uint64_t count;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

struct CoOccurrence {
  std::vector<Term> terms;
  std::vector<std::uint64_t> occurrences;  // w_i over the titles given
  std::vector<PairCount> pairs;            // non-zero c_ij, sorted by (i, j)
  std::uint64_t total_pairs = 0;           // m = sum c_ij

  std::uint64_t count(std::size_t i, std::size_t j) const;
  /// Index of the term with this surface, if present.
  std::optional<std::size_t> find(std::string_view surface) const;
};

/// c_ij = number of distinct titles containing both terms.
CoOccurrence build_cooccurrence(std::span<const Term> terms, std::span<const std::string> titles,
                                const TermExtractionConfig& config);

/// Keeps the given term indices (ascending), renumbering pairs.
CoOccurrence restrict_terms(const CoOccurrence& co, std::span<const std::size_t> keep);
/// Term indices of the largest connected component of the c_ij > 0 graph,
/// ties broken by lowest index. Ascending.
std::vector<std::size_t> largest_connected_terms(const CoOccurrence& co);

struct SimilarityEntry {
  std::size_t i;  // i < j
  std::size_t j;
  double value;
};

struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<SimilarityEntry> entries;  // non-zero, sorted by (i, j)

  double at(std::size_t i, std::size_t j) const;
  SimilarityMatrix scaled(double factor) const;
};

/// s_ij = c_ij / (w_i w_j).
SimilarityMatrix association_strength(const CoOccurrence& co);

using Point = std::array<double, 2>;

struct LayoutParams {
  std::uint64_t seed = 0;
  std::size_t max_iterations = 2000;
  /// Stop when the relative objective decrease of one step falls below this.
  double tolerance = 1e-10;
};

struct TermMapLayout {
  std::vector<Point> coordinates;
  double objective = 0.0;            // sum_{i<j} s_ij |x_i - x_j|^2
  double constraint_residual = 0.0;  // mean pairwise distance - 1
  std::vector<double> objective_trace;  // objective after every accepted step
  std::size_t iterations = 0;
};

double layout_objective(const SimilarityMatrix& s, std::span<const Point> coords);
double mean_pairwise_distance(std::span<const Point> coords);

/// Minimizes sum_{i<j} s_ij |x_i - x_j|^2 subject to a mean pairwise
/// distance of 1 by majorization: each step solves the quadratic majorizer
/// of the scale-free form and renormalizes, so the constrained objective never
/// increases. Seeded start on the unit disk; the result is centered.
/// Throws Error(DegenerateInput) for n < 2 or a disconnected similarity graph.
TermMapLayout layout(const SimilarityMatrix& s, const LayoutParams& params);

enum class ClusterWeighting { association_strength, cooccurrence };

WeightedGraph term_graph(const CoOccurrence& co, ClusterWeighting weighting);
Partition cluster_map(const CoOccurrence& co, const ModularityParams& params,
                      ClusterWeighting weighting = ClusterWeighting::association_strength);

struct TermMapRow {
  std::string term;
  std::size_t doc_frequency = 0;
  double x = 0.0;
  double y = 0.0;
  std::size_t cluster = 0;
};

struct TermMap {
  std::vector<TermMapRow> rows;
  double modularity = 0.0;

  /// `term,doc_frequency,x,y,cluster`, coordinates with 9 decimals.
  std::string to_csv() const;
  /// Throws Error(MalformedRecord).
  static TermMap from_csv(std::string_view text);
};

struct TermMapConfig {
  TermExtractionConfig extraction;
  LayoutParams layout;
  ModularityParams clustering;
  ClusterWeighting weighting = ClusterWeighting::association_strength;
};

/// Titles of DOI-linked publications with at least one linked mention, in
/// publication order.
std::vector<std::string> mentioned_titles(const LinkedCorpus& corpus);

/// extract -> co-occurrence -> largest connected term set -> association
/// strength -> layout + clustering. Throws Error(DegenerateInput) when fewer
/// than two connected terms remain.
TermMap build_term_map(std::span<const std::string> titles, const TermMapConfig& config);

}  // namespace altmap
