#include "altmap/termmap.hpp"

#include "altmap/error.hpp"
#include "altmap/util.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>

namespace altmap {

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
      "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
      "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few",
      "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its",
      "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off",
      "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same",
      "she", "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
      "under", "until", "up", "upon", "using", "versus", "very", "via", "vs", "was", "we", "were",
      "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with", "within",
      "without", "would", "you", "your", "yours", "yourself", "yourselves",
  };
  return words;
}

StopwordSet load_stopwords(const std::string& path) {
  StopwordSet words;
  for (auto line : util::split(util::read_file(path), '\n')) {
    line = util::trim(line);
    if (line.empty() || line.front() == '#') continue;
    words.insert(util::to_lower_ascii(line));
  }
  return words;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

bool word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool has_letter(std::string_view tok) {
  return std::any_of(tok.begin(), tok.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || c >= 0x80;
  });
}

}  // namespace

std::vector<std::vector<std::string>> title_chunks(std::string_view title,
                                                   const StopwordSet& stopwords) {
  std::vector<std::vector<std::string>> chunks;
  std::vector<std::string> current;
  const auto close = [&] {
    if (!current.empty()) chunks.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  while (i < title.size()) {
    const auto c = static_cast<unsigned char>(title[i]);
    if (word_byte(c)) {
      const std::size_t start = i;
      while (i < title.size()) {
        const auto d = static_cast<unsigned char>(title[i]);
        if (word_byte(d)) {
          ++i;
        } else if ((d == '-' || d == '\'') && i + 1 < title.size() &&
                   word_byte(static_cast<unsigned char>(title[i + 1]))) {
          i += 2;
        } else {
          break;
        }
      }
      std::string tok = util::to_lower_ascii(title.substr(start, i - start));
      if (!has_letter(tok) || stopwords.contains(tok)) {
        close();
      } else {
        current.push_back(std::move(tok));
      }
    } else {
      if (!(c == ' ' || c == '\t' || c == '\n' || c == '\r')) close();
      ++i;
    }
  }
  close();
  return chunks;
}

std::vector<std::string> title_phrases(std::string_view title, const TermExtractionConfig& config) {
  std::vector<std::string> phrases;
  for (const auto& chunk : title_chunks(title, config.stopwords)) {
    for (std::size_t start = 0; start < chunk.size(); ++start) {
      std::string phrase;
      for (std::size_t len = 1; len <= config.max_phrase_len && start + len <= chunk.size(); ++len) {
        if (len > 1) phrase += ' ';
        phrase += chunk[start + len - 1];
        phrases.push_back(phrase);
      }
    }
  }
  std::sort(phrases.begin(), phrases.end());
  phrases.erase(std::unique(phrases.begin(), phrases.end()), phrases.end());
  return phrases;
}

std::vector<Term> extract_terms(std::span<const std::string> titles,
                                const TermExtractionConfig& config) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& title : titles) {
    for (auto& phrase : title_phrases(title, config)) ++counts[std::move(phrase)];
  }
  std::vector<Term> terms;
  for (auto& [surface, df] : counts) {
    if (df >= config.min_occurrences) terms.push_back({surface, df});
  }
  if (config.max_terms > 0 && terms.size() > config.max_terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      if (a.doc_frequency != b.doc_frequency) return a.doc_frequency > b.doc_frequency;
      return a.surface < b.surface;
    });
    terms.resize(config.max_terms);
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.surface < b.surface; });
  return terms;
}

// ---------------------------------------------------------------------------
// Co-occurrence

std::uint64_t CoOccurrence::count(std::size_t i, std::size_t j) const {
  if (i == j) return 0;
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{i, j},
                                   [](const PairCount& p, const std::pair<std::size_t, std::size_t>& key) {
                                     return std::tie(p.i, p.j) < std::tie(key.first, key.second);
                                   });
  return (it != pairs.end() && it->i == i && it->j == j) ? it->count : 0;
}

std::optional<std::size_t> CoOccurrence::find(std::string_view surface) const {
  const auto it = std::lower_bound(terms.begin(), terms.end(), surface,
                                   [](const Term& t, std::string_view s) { return t.surface < s; });
  if (it == terms.end() || it->surface != surface) return std::nullopt;
  return static_cast<std::size_t>(it - terms.begin());
}

CoOccurrence build_cooccurrence(std::span<const Term> terms, std::span<const std::string> titles,
                                const TermExtractionConfig& config) {
  CoOccurrence co;
  co.terms.assign(terms.begin(), terms.end());
  std::sort(co.terms.begin(), co.terms.end(),
            [](const Term& a, const Term& b) { return a.surface < b.surface; });
  const std::size_t n = co.terms.size();
  co.occurrences.assign(n, 0);

  std::unordered_map<std::string, std::size_t> index;
  index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index.emplace(co.terms[i].surface, i);

  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
  std::vector<std::size_t> present;
  for (const auto& title : titles) {
    present.clear();
    for (const auto& phrase : title_phrases(title, config)) {
      if (const auto it = index.find(phrase); it != index.end()) present.push_back(it->second);
    }
    std::sort(present.begin(), present.end());
    for (std::size_t a = 0; a < present.size(); ++a) {
      ++co.occurrences[present[a]];
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        ++pair_counts[static_cast<std::uint64_t>(present[a]) * n + present[b]];
      }
    }
  }

  co.pairs.reserve(pair_counts.size());
  for (const auto& [key, c] : pair_counts) {
    co.pairs.push_back({static_cast<std::size_t>(key / n), static_cast<std::size_t>(key % n), c});
    co.total_pairs += c;
  }
  std::sort(co.pairs.begin(), co.pairs.end(), [](const PairCount& a, const PairCount& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  return co;
}

CoOccurrence restrict_terms(const CoOccurrence& co, std::span<const std::size_t> keep) {
  CoOccurrence out;
  constexpr auto kDropped = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> remap(co.terms.size(), kDropped);
  for (const auto i : keep) {
    remap[i] = out.terms.size();
    out.terms.push_back(co.terms[i]);
    out.occurrences.push_back(co.occurrences[i]);
  }
  for (const auto& p : co.pairs) {
    if (remap[p.i] != kDropped && remap[p.j] != kDropped) {
      out.pairs.push_back({remap[p.i], remap[p.j], p.count});
      out.total_pairs += p.count;
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> component_labels(std::size_t n, const auto& edges, std::size_t& count) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    const auto a = root(e.i);
    const auto b = root(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> label(n);
  std::vector<std::size_t> id(n, std::numeric_limits<std::size_t>::max());
  count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = root(i);
    if (id[r] == std::numeric_limits<std::size_t>::max()) id[r] = count++;
    label[i] = id[r];
  }
  return label;
}

}  // namespace

std::vector<std::size_t> largest_connected_terms(const CoOccurrence& co) {
  const std::size_t n = co.terms.size();
  if (n == 0) return {};
  std::size_t count = 0;
  const auto label = component_labels(n, co.pairs, count);
  std::vector<std::size_t> size(count, 0);
  for (const auto l : label) ++size[l];
  // Labels are assigned in order of lowest member, so max_element's first
  // maximum is the tie-break.
  const auto best = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == best) keep.push_back(i);
  }
  return keep;
}

// ---------------------------------------------------------------------------
// Similarity

double SimilarityMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{i, j},
                                   [](const SimilarityEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                                     return std::tie(e.i, e.j) < std::tie(key.first, key.second);
                                   });
  return (it != entries.end() && it->i == i && it->j == j) ? it->value : 0.0;
}

SimilarityMatrix SimilarityMatrix::scaled(double factor) const {
  SimilarityMatrix out = *this;
  for (auto& e : out.entries) e.value *= factor;
  return out;
}

SimilarityMatrix association_strength(const CoOccurrence& co) {
  SimilarityMatrix s;
  s.n = co.terms.size();
  s.entries.reserve(co.pairs.size());
  for (const auto& p : co.pairs) {
    const double denom = static_cast<double>(co.occurrences[p.i]) * static_cast<double>(co.occurrences[p.j]);
    s.entries.push_back({p.i, p.j, static_cast<double>(p.count) / denom});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Layout

double layout_objective(const SimilarityMatrix& s, std::span<const Point> coords) {
  double v = 0.0;
  for (const auto& e : s.entries) {
    const double dx = coords[e.i][0] - coords[e.j][0];
    const double dy = coords[e.i][1] - coords[e.j][1];
    v += e.value * (dx * dx + dy * dy);
  }
  return v;
}

double mean_pairwise_distance(std::span<const Point> coords) {
  const std::size_t n = coords.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total += std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

namespace {

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 2>;

std::vector<Point> to_points(const Coords& x) {
  std::vector<Point> pts(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) pts[static_cast<std::size_t>(i)] = {x(i, 0), x(i, 1)};
  return pts;
}

// Centers and scales to a mean pairwise distance of 1.
void normalize(Coords& x) {
  x.rowwise() -= x.colwise().mean();
  const auto pts = to_points(x);
  const double mean = mean_pairwise_distance(pts);
  if (mean > 0.0) x /= mean;
}

}  // namespace

TermMapLayout layout(const SimilarityMatrix& s, const LayoutParams& params) {
  const std::size_t n = s.n;
  if (n < 2) throw Error(ErrorKind::DegenerateInput, "layout needs at least two terms");
  for (const auto& e : s.entries) {
    if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
      throw Error(ErrorKind::DegenerateInput, "similarities must be finite and non-negative");
    }
  }
  std::vector<SimilarityEntry> positive;
  for (const auto& e : s.entries) {
    if (e.value > 0.0) positive.push_back(e);
  }
  std::size_t components = 0;
  component_labels(n, positive, components);
  if (components != 1) {
    throw Error(ErrorKind::DegenerateInput, "similarity graph is disconnected (" +
                                                std::to_string(components) + " components)");
  }

  const auto ni = static_cast<Eigen::Index>(n);
  // Laplacian of s plus J/n: positive definite on a connected graph, and
  // equal to the Laplacian on centered right-hand sides.
  Eigen::MatrixXd system = Eigen::MatrixXd::Constant(ni, ni, 1.0 / static_cast<double>(n));
  for (const auto& e : positive) {
    const auto a = static_cast<Eigen::Index>(e.i);
    const auto b = static_cast<Eigen::Index>(e.j);
    system(a, a) += e.value;
    system(b, b) += e.value;
    system(a, b) -= e.value;
    system(b, a) -= e.value;
  }
  const Eigen::LLT<Eigen::MatrixXd> solver(system);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateInput, "layout system is not positive definite");
  }

  std::mt19937_64 rng(params.seed);
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Coords x(ni, 2);
  for (Eigen::Index i = 0; i < ni; ++i) {
    const double r = std::sqrt(uniform());
    const double theta = 2.0 * std::numbers::pi * uniform();
    x(i, 0) = r * std::cos(theta);
    x(i, 1) = r * std::sin(theta);
  }
  normalize(x);

  TermMapLayout out;
  double objective = layout_objective(s, to_points(x));
  out.objective_trace.push_back(objective);

  Coords rhs(ni, 2);
  for (std::size_t it = 0; it < params.max_iterations; ++it) {
    // rhs = B(X) X with B_ij = -1/d_ij off the diagonal and zero row sums.
    rhs.setZero();
    for (Eigen::Index i = 0; i < ni; ++i) {
      for (Eigen::Index j = i + 1; j < ni; ++j) {
        const double dx = x(i, 0) - x(j, 0);
        const double dy = x(i, 1) - x(j, 1);
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d <= 0.0) continue;
        rhs(i, 0) += dx / d;
        rhs(i, 1) += dy / d;
        rhs(j, 0) -= dx / d;
        rhs(j, 1) -= dy / d;
      }
    }
    Coords next = 0.5 * solver.solve(rhs);
    normalize(next);
    const double next_objective = layout_objective(s, to_points(next));
    if (!(next_objective <= objective)) break;  // no further descent at this precision
    const double decrease = objective - next_objective;
    x = std::move(next);
    objective = next_objective;
    out.objective_trace.push_back(objective);
    ++out.iterations;
    if (decrease <= params.tolerance * objective) break;
  }

  x.rowwise() -= x.colwise().mean();
  out.coordinates = to_points(x);
  out.objective = layout_objective(s, out.coordinates);
  out.constraint_residual = mean_pairwise_distance(out.coordinates) - 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Clustering and the assembled map

WeightedGraph term_graph(const CoOccurrence& co, ClusterWeighting weighting) {
  std::vector<std::string> names;
  names.reserve(co.terms.size());
  for (const auto& t : co.terms) names.push_back(t.surface);
  WeightedGraph g(std::move(names));
  for (const auto& p : co.pairs) {
    const double w = weighting == ClusterWeighting::cooccurrence
                         ? static_cast<double>(p.count)
                         : static_cast<double>(p.count) / (static_cast<double>(co.occurrences[p.i]) *
                                                           static_cast<double>(co.occurrences[p.j]));
    g.add_edge(p.i, p.j, w);
  }
  g.finalize();
  return g;
}

Partition cluster_map(const CoOccurrence& co, const ModularityParams& params,
                      ClusterWeighting weighting) {
  return detect_communities(term_graph(co, weighting), params);
}

std::string TermMap::to_csv() const {
  std::string out = "term,doc_frequency,x,y,cluster\n";
  for (const auto& r : rows) {
    out += util::csv_field(r.term) + "," + std::to_string(r.doc_frequency) + "," +
           util::format_fixed(r.x, 9) + "," + util::format_fixed(r.y, 9) + "," +
           std::to_string(r.cluster) + "\n";
  }
  return out;
}

TermMap TermMap::from_csv(std::string_view text) {
  TermMap map;
  bool header = true;
  std::vector<std::string> fields;
  for (auto line : util::split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (util::trim(line).empty()) continue;
    if (header) {
      header = false;
      if (line != "term,doc_frequency,x,y,cluster") {
        throw Error(ErrorKind::MalformedRecord, "term map header must be term,doc_frequency,x,y,cluster");
      }
      continue;
    }
    if (!util::parse_csv_line(line, fields) || fields.size() != 5) {
      throw Error(ErrorKind::MalformedRecord, "bad term map row");
    }
    TermMapRow row;
    row.term = fields[0];
    try {
      std::size_t used = 0;
      row.doc_frequency = std::stoull(fields[1], &used);
      row.x = std::stod(fields[2]);
      row.y = std::stod(fields[3]);
      row.cluster = std::stoull(fields[4]);
    } catch (...) {
      throw Error(ErrorKind::MalformedRecord, "bad number in term map row '" + std::string(line) + "'");
    }
    map.rows.push_back(std::move(row));
  }
  return map;
}

std::vector<std::string> mentioned_titles(const LinkedCorpus& corpus) {
  std::vector<std::string> titles;
  const auto& flags = corpus.mentioned_flags();
  for (std::size_t i = 0; i < corpus.publications().size(); ++i) {
    if (flags[i]) titles.push_back(corpus.publications()[i].title);
  }
  return titles;
}

TermMap build_term_map(std::span<const std::string> titles, const TermMapConfig& config) {
  const auto terms = extract_terms(titles, config.extraction);
  const auto full = build_cooccurrence(terms, titles, config.extraction);
  const auto co = restrict_terms(full, largest_connected_terms(full));
  if (co.terms.size() < 2) {
    throw Error(ErrorKind::DegenerateInput, "fewer than two connected terms; lower min_occurrences");
  }
  const auto placed = layout(association_strength(co), config.layout);
  const auto partition = cluster_map(co, config.clustering, config.weighting);

  TermMap map;
  map.modularity = partition.modularity;
  for (std::size_t i = 0; i < co.terms.size(); ++i) {
    map.rows.push_back({co.terms[i].surface, co.terms[i].doc_frequency, placed.coordinates[i][0],
                        placed.coordinates[i][1], partition.assignment[i]});
  }
  return map;
}

}  // namespace altmap
