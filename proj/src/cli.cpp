#include "altmap/cli.hpp"

#include "altmap/community.hpp"
#include "altmap/corpus.hpp"
#include "altmap/error.hpp"
#include "altmap/ingest.hpp"
#include "altmap/network.hpp"
#include "altmap/overlays.hpp"
#include "altmap/store.hpp"
#include "altmap/termmap.hpp"
#include "altmap/util.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <deque>
#include <filesystem>
#include <functional>
#include <ostream>

namespace altmap::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when ingestion rejects data and the partial report must be shown.
struct IngestFailure : std::runtime_error {
  IngestFailure(std::string what, std::string report)
      : std::runtime_error(std::move(what)), report(std::move(report)) {}
  std::string report;
};

[[noreturn]] void bad_value(const std::string& key, std::string_view value, std::string_view why) {
  throw Error(ErrorKind::InvalidConfig,
              "config " + key + " = '" + std::string(value) + "': " + std::string(why));
}

std::uint64_t to_uint(const std::string& key, std::string_view v, std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) bad_value(key, v, "not an unsigned integer");
  if (out < lo || out > hi) {
    bad_value(key, v, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return out;
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "not a finite number");
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "expected true or false");
}

template <typename T>
T one_of(const std::string& key, std::string_view v, std::initializer_list<std::pair<std::string_view, T>> options) {
  for (const auto& [name, value] : options) {
    if (name == v) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  bad_value(key, v, "expected one of " + allowed);
}

std::optional<std::string> path_of(std::string_view v) {
  if (v.empty()) return std::nullopt;
  return std::string(v);
}

// Typed view of the effective configuration.
struct Settings {
  std::optional<std::string> publications, mentions, snapshot, labels, stopwords, graph, termmap,
      overlay, termmap_dir;
  std::optional<std::string> out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool strict = false;
  std::vector<PlatformKind> platforms;
  double fraction = 0.06;
  GraphFormat format = GraphFormat::graphml;
  ModularityParams clustering;
  TermExtractionConfig extraction;
  ClusterWeighting weighting = ClusterWeighting::association_strength;
  LayoutParams layout;
  OverlayStatistic statistic = OverlayStatistic::mean;
  ActorClass rank_class = ActorClass::twitter;
  std::size_t rank_top_n = 25;
  bool heuristics = true;
  bool bot_scope_top = true;
  std::size_t heatmap_top_n = 30;
  std::optional<std::chrono::year_month> heatmap_from, heatmap_to;
  HeatmapCell heatmap_cell = HeatmapCell::papers;
};

Settings settings_from(const std::map<std::string, std::string>& c) {
  const auto get = [&c](const std::string& k) -> const std::string& { return c.at(k); };
  Settings s;
  s.publications = path_of(get("input.publications"));
  s.mentions = path_of(get("input.mentions"));
  s.snapshot = path_of(get("input.snapshot"));
  s.labels = path_of(get("input.labels"));
  s.stopwords = path_of(get("input.stopwords"));
  s.graph = path_of(get("input.graph"));
  s.termmap = path_of(get("input.termmap"));
  s.overlay = path_of(get("input.overlay"));
  s.termmap_dir = path_of(get("input.termmap_dir"));
  s.out_dir = path_of(get("output.dir"));
  s.seed = to_uint("seed", get("seed"), 0, std::numeric_limits<std::uint64_t>::max());
  s.threads = static_cast<unsigned>(to_uint("threads", get("threads"), 1, 256));
  s.strict = to_bool("ingest.strict", get("ingest.strict"));

  std::set<PlatformKind> seen;
  for (auto tok : util::split(get("select.platforms"), ',')) {
    tok = util::trim(tok);
    const auto p = platform_from_token(tok);
    if (!p) bad_value("select.platforms", tok, "unknown platform");
    if (seen.insert(*p).second) s.platforms.push_back(*p);
  }
  if (s.platforms.empty()) bad_value("select.platforms", get("select.platforms"), "select at least one platform");

  s.fraction = to_double("network.fraction", get("network.fraction"));
  if (!(s.fraction > 0.0 && s.fraction <= 1.0)) bad_value("network.fraction", get("network.fraction"), "must be in (0, 1]");
  s.format = one_of<GraphFormat>("network.format", get("network.format"),
                                 {{"graphml", GraphFormat::graphml}, {"edgelist", GraphFormat::edgelist}});

  s.clustering.seed = s.seed;
  s.clustering.resolution = to_double("cluster.gamma", get("cluster.gamma"));
  if (!(s.clustering.resolution > 0.0)) bad_value("cluster.gamma", get("cluster.gamma"), "must be > 0");
  s.clustering.random_starts = to_uint("cluster.random_starts", get("cluster.random_starts"), 1, 1000);
  s.clustering.max_iterations = to_uint("cluster.max_iterations", get("cluster.max_iterations"), 1, 100000);
  s.clustering.min_improvement = to_double("cluster.min_improvement", get("cluster.min_improvement"));
  if (s.clustering.min_improvement < 0.0) {
    bad_value("cluster.min_improvement", get("cluster.min_improvement"), "must be >= 0");
  }

  s.extraction.min_occurrences = to_uint("termmap.min_occurrences", get("termmap.min_occurrences"), 1, 1000000);
  s.extraction.max_phrase_len = to_uint("termmap.max_phrase_len", get("termmap.max_phrase_len"), 1, 10);
  s.extraction.max_terms = to_uint("termmap.max_terms", get("termmap.max_terms"), 0, 5000);
  s.weighting = one_of<ClusterWeighting>(
      "termmap.weighting", get("termmap.weighting"),
      {{"association_strength", ClusterWeighting::association_strength},
       {"cooccurrence", ClusterWeighting::cooccurrence}});
  s.layout.seed = s.seed;
  s.layout.max_iterations = to_uint("layout.max_iterations", get("layout.max_iterations"), 1, 1000000);
  s.layout.tolerance = to_double("layout.tolerance", get("layout.tolerance"));
  if (s.layout.tolerance < 0.0) bad_value("layout.tolerance", get("layout.tolerance"), "must be >= 0");

  s.statistic = one_of<OverlayStatistic>("overlay.statistic", get("overlay.statistic"),
                                         {{"mean", OverlayStatistic::mean}, {"sum", OverlayStatistic::sum}});
  s.rank_class = one_of<ActorClass>("rank.class", get("rank.class"),
                                    {{"twitter", ActorClass::twitter},
                                     {"news", ActorClass::news},
                                     {"policy", ActorClass::policy},
                                     {"other", ActorClass::other}});
  s.rank_top_n = to_uint("rank.top_n", get("rank.top_n"), 1, 1000000);
  s.heuristics = to_bool("rank.heuristics", get("rank.heuristics"));
  s.bot_scope_top = one_of<bool>("rank.bot_scope", get("rank.bot_scope"), {{"top", true}, {"all", false}});
  s.heatmap_top_n = to_uint("heatmap.top_n", get("heatmap.top_n"), 1, 1000000);
  for (const auto* key : {"heatmap.from", "heatmap.to"}) {
    const auto& v = get(key);
    if (v.empty()) continue;
    const auto ym = parse_year_month(v);
    if (!ym) bad_value(key, v, "expected YYYY-MM");
    (std::string_view(key) == "heatmap.from" ? s.heatmap_from : s.heatmap_to) = ym;
  }
  s.heatmap_cell = one_of<HeatmapCell>("heatmap.cell", get("heatmap.cell"),
                                       {{"papers", HeatmapCell::papers}, {"mentions", HeatmapCell::mentions}});
  return s;
}

// Reads inputs, remembering their hashes for the manifest.
class Inputs {
 public:
  std::string read(const std::string& path) {
    auto text = util::read_file(path);
    hashes_.emplace_back(path, util::hex64(util::fnv1a64(text)));
    return text;
  }
  const std::vector<std::pair<std::string, std::string>>& hashes() const { return hashes_; }

 private:
  std::vector<std::pair<std::string, std::string>> hashes_;
};

// Outputs are buffered and written together after the command succeeded.
class Outputs {
 public:
  void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
  bool empty() const { return files_.empty(); }

  void commit(const std::string& dir, const std::string& manifest_head) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create directory " + dir + ": " + ec.message());
    std::string manifest = manifest_head;
    for (const auto& [name, content] : files_) {
      util::write_file((std::filesystem::path(dir) / name).string(), content);
      manifest += "output " + name + " fnv1a64=" + util::hex64(util::fnv1a64(content)) + "\n";
    }
    util::write_file((std::filesystem::path(dir) / "manifest.txt").string(), manifest);
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Run {
  Settings settings;
  Inputs inputs;
  Outputs outputs;
  std::ostream& out;
  std::ostream& err;
};

LinkedCorpus load_corpus(Run& run) {
  const auto& s = run.settings;
  if (s.snapshot) return deserialize_snapshot(run.inputs.read(*s.snapshot));
  if (s.publications && s.mentions) {
    auto pubs = parse_publications(run.inputs.read(*s.publications), s.threads);
    auto mentions = parse_mentions(run.inputs.read(*s.mentions), s.threads);
    return link_corpus(std::move(pubs.records), std::move(mentions.records));
  }
  throw UsageError("need --snapshot, or both --pubs and --mentions");
}

std::set<PlatformKind> platform_set(const Settings& s) { return {s.platforms.begin(), s.platforms.end()}; }

std::string need_path(const std::optional<std::string>& p, std::string_view flag) {
  if (!p) throw UsageError("missing required " + std::string(flag));
  return *p;
}

GraphFormat format_of_path(const std::string& path) {
  return path.ends_with(".graphml") || path.ends_with(".xml") ? GraphFormat::graphml : GraphFormat::edgelist;
}

std::string graph_file_name(std::string_view stem, GraphFormat f) {
  return std::string(stem) + (f == GraphFormat::graphml ? ".graphml" : ".tsv");
}

AttentionGraph read_graph(Run& run) {
  const auto path = need_path(run.settings.graph, "--graph");
  const auto text = run.inputs.read(path);
  return format_of_path(path) == GraphFormat::graphml ? from_graphml(text) : from_edgelist(text);
}

TermExtractionConfig extraction_of(Run& run) {
  auto config = run.settings.extraction;
  if (run.settings.stopwords) {
    run.inputs.read(*run.settings.stopwords);
    config.stopwords = load_stopwords(*run.settings.stopwords);
  }
  return config;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_ingest(Run& run) {
  const auto& s = run.settings;
  const auto pubs_path = need_path(s.publications, "--pubs");
  const auto mentions_path = need_path(s.mentions, "--mentions");

  PublicationParse pubs;
  try {
    pubs = parse_publications(run.inputs.read(pubs_path), s.threads);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MalformedRow) throw;
    throw IngestFailure(e.what(), "publications.rows_read=0\n");
  }
  auto mentions = parse_mentions(run.inputs.read(mentions_path), s.threads);

  std::string report;
  const auto prefixed = [&report](std::string_view prefix, const std::string& text) {
    for (auto line : util::split(text, '\n')) {
      if (!line.empty()) report += std::string(prefix) + std::string(line) + "\n";
    }
  };
  prefixed("publications.", pubs.report.to_text());
  prefixed("mentions.", mentions.report.to_text());
  if (s.strict && (pubs.report.rows_malformed > 0 || mentions.report.rows_malformed > 0)) {
    throw IngestFailure("malformed rows rejected in strict mode", report);
  }

  const auto corpus = link_corpus(std::move(pubs.records), std::move(mentions.records));
  report += "corpus.publications=" + std::to_string(corpus.publications().size()) + "\n";
  report += "corpus.linked_mentions=" + std::to_string(corpus.linked_mention_count()) + "\n";
  report += "corpus.unlinked_mentions=" + std::to_string(corpus.unlinked_mention_count()) + "\n";
  report += "corpus.distinct_mentioned=" + std::to_string(corpus.distinct_mentioned_publications()) + "\n";
  run.out << report;
  run.outputs.add("snapshot.altmap", serialize_snapshot(corpus));
  run.outputs.add("ingest_report.txt", report);
}

void cmd_stats(Run& run) {
  const auto corpus = load_corpus(run);
  const auto stats = platform_stats(corpus);
  const auto coverage = coverage_stats(corpus);
  run.out << stats.to_table() << "\n" << coverage.to_text();
  run.outputs.add("platform_stats.csv", stats.to_csv());
  run.outputs.add("platform_stats.txt", stats.to_table());
  run.outputs.add("coverage.txt", coverage.to_text());
}

void add_graph_outputs(Run& run, const AttentionGraph& graph, std::string_view stem) {
  const auto format = run.settings.format;
  run.outputs.add(graph_file_name(stem, format),
                  format == GraphFormat::graphml ? to_graphml(graph) : to_edgelist(graph));
  const auto shares = node_shares(graph);
  run.out << shares.to_text();
  run.outputs.add(std::string(stem) + "_shares.txt", shares.to_text());
}

void cmd_network_build(Run& run) {
  const auto corpus = load_corpus(run);
  const auto graph = build_graph(corpus, platform_set(run.settings));
  add_graph_outputs(run, graph, "network");
  std::set<ActorClass> classes;
  for (const auto p : run.settings.platforms) classes.insert(actor_class_of(p));
  for (const auto cls : classes) {
    run.outputs.add("actor_distribution_" + std::string(token(cls)) + ".csv",
                    actor_distribution(graph, cls).to_csv());
  }
}

void cmd_network_filter(Run& run) {
  const auto graph = read_graph(run);
  add_graph_outputs(run, filter_for_display(graph, run.settings.fraction), "filtered");
}

void cmd_network_export(Run& run) {
  const auto graph = read_graph(run);
  const auto format = run.settings.format;
  run.outputs.add(graph_file_name("graph", format),
                  format == GraphFormat::graphml ? to_graphml(graph) : to_edgelist(graph));
}

void cmd_cluster(Run& run) {
  const auto graph = run.settings.graph ? read_graph(run) : [&] {
    const auto corpus = load_corpus(run);
    return build_graph(corpus, platform_set(run.settings));
  }();
  const auto weighted = graph.to_weighted_graph();
  const auto& params = run.settings.clustering;
  const auto partition = detect_communities(weighted, params);
  const auto baseline = local_moving_baseline(weighted, params);

  std::string sizes = "community_id,size\n";
  for (const auto& [id, size] : cluster_sizes(partition)) {
    sizes += std::to_string(id) + "," + std::to_string(size) + "\n";
  }
  const std::string summary = "nodes=" + std::to_string(weighted.node_count()) +
                              "\ncommunities=" + std::to_string(partition.community_count) +
                              "\nmodularity=" + util::format_fixed(partition.modularity, 12) +
                              "\nbaseline_modularity=" + util::format_fixed(baseline.modularity, 12) +
                              "\ngamma=" + util::format_double(params.resolution) +
                              "\nseed=" + std::to_string(params.seed) + "\n";
  run.out << summary;
  run.outputs.add("partition.csv", partition_csv(weighted, partition));
  run.outputs.add("cluster_sizes.csv", sizes);
  run.outputs.add("cluster_summary.txt", summary);
}

std::string terms_csv(const CoOccurrence& co) {
  std::string out = "term,doc_frequency\n";
  for (const auto& t : co.terms) out += util::csv_field(t.surface) + "," + std::to_string(t.doc_frequency) + "\n";
  return out;
}

std::string pairs_csv(const CoOccurrence& co) {
  std::string out = "term_a,term_b,count\n";
  for (const auto& p : co.pairs) {
    out += util::csv_field(co.terms[p.i].surface) + "," + util::csv_field(co.terms[p.j].surface) + "," +
           std::to_string(p.count) + "\n";
  }
  return out;
}

// Rebuilds a co-occurrence table from terms.csv and pairs.csv.
CoOccurrence read_cooccurrence(std::string_view terms_text, std::string_view pairs_text) {
  CoOccurrence co;
  std::vector<std::string> fields;
  const auto rows = [&fields](std::string_view text, std::string_view header, std::size_t width,
                              const std::function<void()>& each) {
    bool first = true;
    for (auto line : util::split(text, '\n')) {
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (util::trim(line).empty()) continue;
      if (first) {
        first = false;
        if (line != header) throw Error(ErrorKind::MalformedRecord, "expected header " + std::string(header));
        continue;
      }
      if (!util::parse_csv_line(line, fields) || fields.size() != width) {
        throw Error(ErrorKind::MalformedRecord, "bad row '" + std::string(line) + "'");
      }
      each();
    }
  };
  const auto number = [](const std::string& f) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || end != f.data() + f.size() || v == 0) {
      throw Error(ErrorKind::MalformedRecord, "bad count '" + f + "'");
    }
    return v;
  };
  rows(terms_text, "term,doc_frequency", 2, [&] {
    co.terms.push_back({fields[0], number(fields[1])});
  });
  std::sort(co.terms.begin(), co.terms.end(), [](const Term& a, const Term& b) { return a.surface < b.surface; });
  for (const auto& t : co.terms) co.occurrences.push_back(t.doc_frequency);
  rows(pairs_text, "term_a,term_b,count", 3, [&] {
    auto i = co.find(fields[0]);
    auto j = co.find(fields[1]);
    if (!i || !j || *i == *j) throw Error(ErrorKind::MalformedRecord, "pair names an unknown term");
    if (*i > *j) std::swap(i, j);
    co.pairs.push_back({*i, *j, number(fields[2])});
  });
  std::sort(co.pairs.begin(), co.pairs.end(),
            [](const PairCount& a, const PairCount& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (std::size_t k = 1; k < co.pairs.size(); ++k) {
    if (co.pairs[k].i == co.pairs[k - 1].i && co.pairs[k].j == co.pairs[k - 1].j) {
      throw Error(ErrorKind::MalformedRecord, "pair listed twice");
    }
  }
  for (const auto& p : co.pairs) co.total_pairs += p.count;
  return co;
}

void emit_term_map(Run& run, const CoOccurrence& co) {
  if (co.terms.size() < 2) {
    throw Error(ErrorKind::DegenerateInput, "fewer than two connected terms; lower termmap.min_occurrences");
  }
  const auto placed = layout(association_strength(co), run.settings.layout);
  const auto partition = cluster_map(co, run.settings.clustering, run.settings.weighting);
  TermMap map;
  map.modularity = partition.modularity;
  for (std::size_t i = 0; i < co.terms.size(); ++i) {
    map.rows.push_back({co.terms[i].surface, co.terms[i].doc_frequency, placed.coordinates[i][0],
                        placed.coordinates[i][1], partition.assignment[i]});
  }
  const std::string summary = "terms=" + std::to_string(co.terms.size()) +
                              "\npairs=" + std::to_string(co.pairs.size()) +
                              "\nlayout_objective=" + util::format_fixed(placed.objective, 12) +
                              "\nlayout_iterations=" + std::to_string(placed.iterations) +
                              "\nmean_distance_residual=" + util::format_fixed(placed.constraint_residual, 12) +
                              "\nclusters=" + std::to_string(partition.community_count) +
                              "\nmodularity=" + util::format_fixed(partition.modularity, 12) + "\n";
  run.out << summary;
  run.outputs.add("termmap.csv", map.to_csv());
  run.outputs.add("termmap_summary.txt", summary);
}

void cmd_termmap_build(Run& run) {
  const auto corpus = load_corpus(run);
  const auto extraction = extraction_of(run);
  const auto titles = mentioned_titles(corpus);
  const auto terms = extract_terms(titles, extraction);
  const auto full = build_cooccurrence(terms, titles, extraction);
  const auto co = restrict_terms(full, largest_connected_terms(full));
  run.outputs.add("terms.csv", terms_csv(co));
  run.outputs.add("pairs.csv", pairs_csv(co));
  emit_term_map(run, co);
}

void cmd_termmap_layout(Run& run) {
  const std::filesystem::path dir = need_path(run.settings.termmap_dir, "--from");
  const auto terms = run.inputs.read((dir / "terms.csv").string());
  const auto pairs = run.inputs.read((dir / "pairs.csv").string());
  emit_term_map(run, read_cooccurrence(terms, pairs));
}

TermMap read_term_map(Run& run) {
  return TermMap::from_csv(run.inputs.read(need_path(run.settings.termmap, "--termmap")));
}

void cmd_overlay(Run& run) {
  const auto map = read_term_map(run);
  const auto corpus = load_corpus(run);
  const auto extraction = extraction_of(run);
  for (const auto p : run.settings.platforms) {
    const auto scores = overlay_scores(map, corpus, p, extraction, run.settings.statistic);
    run.out << token(p) << ": " << scores.size() << " terms with support\n";
    run.outputs.add("overlay_" + std::string(token(p)) + ".csv", overlay_csv(scores));
  }
}

void cmd_render(Run& run) {
  const auto map = read_term_map(run);
  if (run.settings.overlay) {
    const auto scores = overlay_from_csv(run.inputs.read(*run.settings.overlay));
    run.outputs.add("overlay_map.svg", render_svg(map, scores));
  } else {
    run.outputs.add("cluster_map.svg", render_svg(map, Partition{}));
  }
}

void cmd_rank(Run& run) {
  const auto& s = run.settings;
  const auto corpus = load_corpus(run);
  const auto ranking = top_actors(corpus, s.rank_class, s.rank_top_n);
  std::map<std::string, AccountType> manual;
  if (s.labels) manual = parse_label_file(run.inputs.read(*s.labels));
  const auto labels = classify_accounts(corpus, manual, s.heuristics);

  std::optional<std::set<std::string>> scope;
  if (s.bot_scope_top) {
    scope.emplace();
    for (const auto& r : ranking.rows) scope->insert(r.actor_id);
  }
  const auto share = bot_share(corpus, labels, scope);

  const std::string stem = "ranking_" + std::string(token(s.rank_class));
  run.out << ranking.to_table() << "\n" << share.to_text();
  run.outputs.add(stem + ".csv", ranking.to_csv());
  run.outputs.add(stem + ".txt", ranking.to_table());
  run.outputs.add("labels.csv", labels_csv(labels));
  run.outputs.add("bot_share.txt", share.to_text());
}

void cmd_heatmap(Run& run) {
  const auto& s = run.settings;
  const auto corpus = load_corpus(run);
  const auto extraction = extraction_of(run);
  for (const auto p : s.platforms) {
    MonthRange range{};
    if (s.heatmap_from && s.heatmap_to) {
      range = {*s.heatmap_from, *s.heatmap_to};
    } else {
      const auto span = platform_month_span(corpus, p);
      range = {s.heatmap_from.value_or(span.first), s.heatmap_to.value_or(span.last)};
    }
    const auto heat = noun_phrase_heatmap(corpus, p, s.heatmap_top_n, range, extraction, s.heatmap_cell);
    run.out << token(p) << ": " << heat.phrases.size() << " phrases x " << heat.months.size() << " months\n";
    const std::string stem = "heatmap_" + std::string(token(p));
    run.outputs.add(stem + ".csv", heat.to_csv());
    run.outputs.add(stem + ".txt", heat.to_table());
  }
}

// ---------------------------------------------------------------------------
// Flag plumbing

// Each flag writes a config key; flags are applied after the config file.
class FlagBinder {
 public:
  void option(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    auto& slot = storage_.emplace_back();
    bound_.push_back({app->add_option(name, slot, help), key, &slot, ""});
  }
  void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& value,
            const std::string& help) {
    bound_.push_back({app->add_flag(name, help), key, nullptr, value});
  }
  void apply(std::map<std::string, std::string>& config) const {
    for (const auto& b : bound_) {
      if (b.option->count() == 0) continue;
      config[b.key] = b.slot != nullptr ? *b.slot : b.fixed;
    }
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::string key;
    const std::string* slot;
    std::string fixed;
  };
  std::deque<std::string> storage_;
  std::vector<Binding> bound_;
};

void corpus_flags(CLI::App* app, FlagBinder& b) {
  b.option(app, "--pubs", "input.publications", "Publications TSV");
  b.option(app, "--mentions", "input.mentions", "Mentions JSON lines");
  b.option(app, "--snapshot", "input.snapshot", "Corpus snapshot (instead of --pubs/--mentions)");
}

void extraction_flags(CLI::App* app, FlagBinder& b) {
  b.option(app, "--stopwords", "input.stopwords", "Stopword list, one per line");
  b.option(app, "--max-len", "termmap.max_phrase_len", "Longest phrase in tokens");
}

std::string manifest_head(const std::vector<std::string>& args, const std::string& command,
                          const std::map<std::string, std::string>& config, const Settings& settings,
                          const Inputs& inputs) {
  std::string config_text;
  for (const auto& [k, v] : config) config_text += k + "=" + v + "\n";
  std::string head = "altmap " + std::string(kVersion) + "\ncommand " + command + "\nargv";
  for (const auto& a : args) head += " " + a;
  head += "\n";
  for (const auto& [path, hash] : inputs.hashes()) head += "input " + path + " fnv1a64=" + hash + "\n";
  head += "seed " + std::to_string(settings.seed) + "\n";
  head += "config_hash fnv1a64=" + util::hex64(util::fnv1a64(config_text)) + "\n";
  for (const auto& [k, v] : config) head += "config " + k + "=" + v + "\n";
  return head;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (auto line : util::split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = util::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::InvalidConfig, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key{util::trim(line.substr(0, eq))};
    if (key.empty()) throw Error(ErrorKind::InvalidConfig, "config line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, std::string(util::trim(line.substr(eq + 1)))).second) {
      throw Error(ErrorKind::InvalidConfig, "config key '" + key + "' given twice");
    }
  }
  return out;
}

const std::map<std::string, std::string>& default_config() {
  static const std::map<std::string, std::string> defaults = {
      {"input.publications", ""},
      {"input.mentions", ""},
      {"input.snapshot", ""},
      {"input.labels", ""},
      {"input.stopwords", ""},
      {"input.graph", ""},
      {"input.termmap", ""},
      {"input.overlay", ""},
      {"input.termmap_dir", ""},
      {"output.dir", ""},
      {"seed", "0"},
      {"threads", "1"},
      {"ingest.strict", "false"},
      {"select.platforms", "tweet,news_story,policy_document"},
      {"network.fraction", "0.06"},
      {"network.format", "graphml"},
      {"cluster.gamma", "1"},
      {"cluster.random_starts", "10"},
      {"cluster.max_iterations", "100"},
      {"cluster.min_improvement", "1e-10"},
      {"termmap.min_occurrences", "10"},
      {"termmap.max_phrase_len", "3"},
      {"termmap.max_terms", "300"},
      {"termmap.weighting", "association_strength"},
      {"layout.max_iterations", "2000"},
      {"layout.tolerance", "1e-10"},
      {"overlay.statistic", "mean"},
      {"rank.class", "twitter"},
      {"rank.top_n", "25"},
      {"rank.heuristics", "true"},
      {"rank.bot_scope", "top"},
      {"heatmap.top_n", "30"},
      {"heatmap.from", ""},
      {"heatmap.to", ""},
      {"heatmap.cell", "papers"},
  };
  return defaults;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Altmetric science-mapping pipeline", "altmap"};
  app.require_subcommand(1);
  FlagBinder b;
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value config file");
  app.set_version_flag("--version", std::string(kVersion));

  const auto common = [&](CLI::App* sub) {
    sub->fallthrough();
    b.option(sub, "--out", "output.dir", "Output directory");
    b.option(sub, "--seed", "seed", "Random seed");
    b.option(sub, "--threads", "threads", "Parser threads");
    return sub;
  };
  std::vector<std::pair<CLI::App*, std::function<void(Run&)>>> commands;
  const auto leaf = [&](CLI::App* sub, std::function<void(Run&)> fn) {
    common(sub);
    commands.emplace_back(sub, std::move(fn));
    return sub;
  };

  auto* ingest = leaf(app.add_subcommand("ingest", "Parse and link inputs into a snapshot"), cmd_ingest);
  b.option(ingest, "--pubs", "input.publications", "Publications TSV");
  b.option(ingest, "--mentions", "input.mentions", "Mentions JSON lines");
  b.flag(ingest, "--strict", "ingest.strict", "true", "Fail on malformed rows");

  auto* stats = leaf(app.add_subcommand("stats", "Per-platform mention table"), cmd_stats);
  corpus_flags(stats, b);

  auto* network = app.add_subcommand("network", "Two-mode attention network");
  network->require_subcommand(1);
  network->fallthrough();
  auto* net_build = leaf(network->add_subcommand("build", "Build from the corpus"), cmd_network_build);
  corpus_flags(net_build, b);
  b.option(net_build, "--platforms", "select.platforms", "Comma-separated platform tokens");
  b.option(net_build, "--format", "network.format", "graphml or edgelist");
  auto* net_filter = leaf(network->add_subcommand("filter", "Keep the top fraction for display"), cmd_network_filter);
  b.option(net_filter, "--graph", "input.graph", "Graph file (.graphml or edge list)");
  b.option(net_filter, "--fraction", "network.fraction", "Fraction of nodes, (0, 1]");
  b.option(net_filter, "--format", "network.format", "graphml or edgelist");
  auto* net_export = leaf(network->add_subcommand("export", "Convert between graph formats"), cmd_network_export);
  b.option(net_export, "--graph", "input.graph", "Graph file (.graphml or edge list)");
  b.option(net_export, "--format", "network.format", "graphml or edgelist");

  auto* cluster = leaf(app.add_subcommand("cluster", "Modularity communities of the network"), cmd_cluster);
  corpus_flags(cluster, b);
  b.option(cluster, "--graph", "input.graph", "Graph file instead of the corpus");
  b.option(cluster, "--platforms", "select.platforms", "Comma-separated platform tokens");
  b.option(cluster, "--gamma", "cluster.gamma", "Resolution parameter");
  b.option(cluster, "--random-starts", "cluster.random_starts", "Seeded restarts");

  auto* termmap = app.add_subcommand("termmap", "Term co-occurrence map");
  termmap->require_subcommand(1);
  termmap->fallthrough();
  auto* tm_build = leaf(termmap->add_subcommand("build", "Extract terms, lay out and cluster"), cmd_termmap_build);
  corpus_flags(tm_build, b);
  extraction_flags(tm_build, b);
  b.option(tm_build, "--min-occ", "termmap.min_occurrences", "Minimum titles per term");
  b.option(tm_build, "--max-terms", "termmap.max_terms", "Keep the most frequent terms (0 = all)");
  b.option(tm_build, "--gamma", "cluster.gamma", "Resolution parameter");
  b.option(tm_build, "--weighting", "termmap.weighting", "association_strength or cooccurrence");
  auto* tm_layout = leaf(termmap->add_subcommand("layout", "Redo layout and clustering from terms.csv/pairs.csv"),
                         cmd_termmap_layout);
  b.option(tm_layout, "--from", "input.termmap_dir", "Directory holding terms.csv and pairs.csv");
  b.option(tm_layout, "--gamma", "cluster.gamma", "Resolution parameter");
  b.option(tm_layout, "--weighting", "termmap.weighting", "association_strength or cooccurrence");

  auto* overlay = leaf(app.add_subcommand("overlay", "Per-platform overlay scores"), cmd_overlay);
  corpus_flags(overlay, b);
  extraction_flags(overlay, b);
  b.option(overlay, "--termmap", "input.termmap", "termmap.csv");
  b.option(overlay, "--platforms", "select.platforms", "Comma-separated platform tokens");
  b.option(overlay, "--statistic", "overlay.statistic", "mean or sum");

  auto* render = leaf(app.add_subcommand("render", "SVG of the term map"), cmd_render);
  b.option(render, "--termmap", "input.termmap", "termmap.csv");
  b.option(render, "--overlay", "input.overlay", "Overlay CSV; omit for cluster colors");

  auto* rank = leaf(app.add_subcommand("rank", "Top actors, account labels and bot share"), cmd_rank);
  corpus_flags(rank, b);
  b.option(rank, "--class", "rank.class", "twitter, news, policy or other");
  b.option(rank, "--top-n,--n", "rank.top_n", "Rows to keep");
  b.option(rank, "--labels", "input.labels", "Manual labels CSV actor_id,type");
  b.flag(rank, "--no-heuristics", "rank.heuristics", "false", "Disable heuristic bot labels");
  b.option(rank, "--bot-scope", "rank.bot_scope", "top or all");

  auto* heatmap = leaf(app.add_subcommand("heatmap", "Phrase by month heatmap"), cmd_heatmap);
  corpus_flags(heatmap, b);
  extraction_flags(heatmap, b);
  b.option(heatmap, "--platforms", "select.platforms", "Comma-separated platform tokens");
  b.option(heatmap, "--top-n", "heatmap.top_n", "Phrases to keep");
  b.option(heatmap, "--from", "heatmap.from", "First month YYYY-MM");
  b.option(heatmap, "--to", "heatmap.to", "Last month YYYY-MM");
  b.option(heatmap, "--cell", "heatmap.cell", "papers or mentions");

  std::vector<const char*> argv{"altmap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  const auto chosen = std::find_if(commands.begin(), commands.end(),
                                   [](const auto& c) { return c.first->parsed(); });
  if (chosen == commands.end()) {
    err << "error: no command given\n";
    return kUsage;
  }
  std::string command_name = chosen->first->get_name();
  if (const auto* parent = chosen->first->get_parent(); parent != nullptr && parent != &app) {
    command_name = parent->get_name() + " " + command_name;
  }

  try {
    auto config = default_config();
    if (!config_path.empty()) {
      for (const auto& [k, v] : parse_config_text(util::read_file(config_path))) {
        if (!config.contains(k)) throw Error(ErrorKind::InvalidConfig, "unknown config key '" + k + "'");
        config[k] = v;
      }
    }
    b.apply(config);
    Run run{settings_from(config), {}, {}, out, err};
    if (!run.settings.out_dir && command_name != "stats") throw UsageError("missing required --out");
    if (!config_path.empty()) run.inputs.read(config_path);
    chosen->second(run);
    if (run.settings.out_dir) {
      run.outputs.commit(*run.settings.out_dir,
                         manifest_head(args, command_name, config, run.settings, run.inputs));
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IngestFailure& e) {
    err << "data error: " << e.what() << "\n" << e.report;
    return kData;
  } catch (const Error& e) {
    err << (e.kind() == ErrorKind::InvalidConfig ? "config error: "
            : is_io_error(e.kind())              ? "i/o error: "
                                                 : "data error: ")
        << to_string(e.kind()) << ": " << e.what() << "\n";
    if (e.kind() == ErrorKind::InvalidConfig) return kUsage;
    return is_io_error(e.kind()) ? kIo : kData;
  }
}

}  // namespace altmap::cli
