#include "altmap/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using altmap::cli::run_command;

namespace {

const std::string kData = ALTMAP_DATA;
const std::string kPubs = kData + "/fixtures/table1_publications.tsv";
const std::string kMentions = kData + "/fixtures/table1_mentions.jsonl";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::path(ALTMAP_BINARY_DIR) / "cli" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Snapshot of the bundled fixture, built once.
const std::string& snapshot() {
  static const std::string path = [] {
    const auto dir = scratch("snapshot");
    const auto r = run({"ingest", "--pubs", kPubs, "--mentions", kMentions, "--out", dir.string()});
    REQUIRE(r.code == 0);
    return (dir / "snapshot.altmap").string();
  }();
  return path;
}

}  // namespace

TEST_CASE("cli: usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"stats", "--bogus"}).code == 1);
  CHECK(run({"cluster", "--snapshot", "x"}).code == 1);  // no --out
  CHECK(run({"stats"}).code == 1);                       // no inputs
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("1.0.0") != std::string::npos);
}

TEST_CASE("cli: missing input exits 3, strict ingest exits 2") {
  const auto dir = scratch("io");
  CHECK(run({"ingest", "--pubs", "/nonexistent.tsv", "--mentions", kMentions, "--out", dir.string()}).code == 3);
  CHECK_FALSE(fs::exists(dir));

  const auto strict = run({"ingest", "--pubs", kPubs, "--mentions", std::string(ALTMAP_TEST_DATA) + "/mentions_100.jsonl",
                           "--strict", "--out", dir.string()});
  CHECK(strict.code == 2);
  CHECK(strict.err.find("mentions.rows_malformed=7") != std::string::npos);
  CHECK_FALSE(fs::exists(dir));

  const auto lenient = run({"ingest", "--pubs", kPubs, "--mentions", std::string(ALTMAP_TEST_DATA) + "/mentions_100.jsonl",
                            "--out", dir.string()});
  CHECK(lenient.code == 0);
  CHECK(slurp(dir / "ingest_report.txt").find("mentions.rows_accepted=93\n") != std::string::npos);
}

TEST_CASE("cli: invalid config is rejected before anything is written") {
  const auto dir = scratch("badconfig");
  const auto cfg = scratch("badconfig.cfg");
  for (const std::string text : {"no_such.key = 1\n", "network.fraction = 2\n", "seed = -3\n", "cluster.gamma = abc\n",
                                 "rank.class = robots\n", "seed = 1\nseed = 2\n", "just words\n"}) {
    write(cfg, text);
    const auto r = run({"--config", cfg.string(), "stats", "--pubs", kPubs, "--mentions", kMentions, "--out", dir.string()});
    CHECK_MESSAGE(r.code == 1, text);
    CHECK(r.err.find("config") != std::string::npos);
    CHECK_FALSE(fs::exists(dir));
  }
  CHECK(run({"network", "filter", "--graph", "g.graphml", "--fraction", "0", "--out", dir.string()}).code == 1);
  CHECK(run({"heatmap", "--snapshot", snapshot(), "--from", "2016-13", "--out", dir.string()}).code == 1);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("cli: command-line flags win over the config file") {
  const auto dir = scratch("precedence");
  const auto cfg = scratch("precedence.cfg");
  write(cfg, "# ranking\nrank.top_n = 3\nseed = 11\n");
  REQUIRE(run({"--config", cfg.string(), "rank", "--snapshot", snapshot(), "--n", "5", "--out", dir.string()}).code == 0);
  const auto csv = slurp(dir / "ranking_twitter.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const auto manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("config rank.top_n=5\n") != std::string::npos);
  CHECK(manifest.find("seed 11\n") != std::string::npos);
  CHECK(manifest.find("config_hash fnv1a64=") != std::string::npos);
  CHECK(manifest.find("altmap 1.0.0\n") == 0);
}

TEST_CASE("cli: stats on the bundled fixture") {
  const auto r = run({"stats", "--pubs", kPubs, "--mentions", kMentions});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Tweet                1346               84.4") != std::string::npos);
  CHECK(r.out.find("doi_percent=88.2") != std::string::npos);
}

TEST_CASE("cli: cluster with a fixed seed is byte-identical") {
  const auto a = scratch("cluster_a"), b = scratch("cluster_b");
  REQUIRE(run({"cluster", "--snapshot", snapshot(), "--seed", "7", "--out", a.string()}).code == 0);
  REQUIRE(run({"cluster", "--snapshot", snapshot(), "--seed", "7", "--out", b.string()}).code == 0);
  CHECK(slurp(a / "partition.csv") == slurp(b / "partition.csv"));
  CHECK(slurp(a / "cluster_sizes.csv") == slurp(b / "cluster_sizes.csv"));
  CHECK_FALSE(slurp(a / "partition.csv").empty());
}

TEST_CASE("cli: rank --n 25 gives both count columns") {
  const auto dir = scratch("rank");
  REQUIRE(run({"rank", "--snapshot", snapshot(), "--class", "twitter", "--n", "25", "--out", dir.string()}).code == 0);
  std::istringstream csv(slurp(dir / "ranking_twitter.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "rank,actor_id,name,class,distinct_papers,total_mentions,repeat_heavy");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 25);
  CHECK(fs::exists(dir / "bot_share.txt"));
  CHECK(fs::exists(dir / "labels.csv"));
}

TEST_CASE("cli: network, termmap, overlay, render and heatmap chain") {
  const auto net = scratch("net");
  REQUIRE(run({"network", "build", "--snapshot", snapshot(), "--out", net.string()}).code == 0);
  const auto graph = (net / "network.graphml").string();
  const auto filt = scratch("filt");
  REQUIRE(run({"network", "filter", "--graph", graph, "--fraction", "0.06", "--out", filt.string()}).code == 0);
  const auto exp = scratch("exp");
  REQUIRE(run({"network", "export", "--graph", graph, "--format", "edgelist", "--out", exp.string()}).code == 0);
  const auto back = scratch("back");
  REQUIRE(run({"network", "export", "--graph", (exp / "graph.tsv").string(), "--format", "edgelist", "--out",
               back.string()}).code == 0);
  CHECK(slurp(back / "graph.tsv") == slurp(exp / "graph.tsv"));
  const auto same = scratch("same");
  REQUIRE(run({"network", "export", "--graph", graph, "--out", same.string()}).code == 0);
  CHECK(slurp(same / "graph.graphml") == slurp(net / "network.graphml"));

  const auto tm = scratch("tm");
  REQUIRE(run({"termmap", "build", "--snapshot", snapshot(), "--min-occ", "3", "--seed", "2", "--out", tm.string()}).code == 0);
  const auto relaid = scratch("relaid");
  REQUIRE(run({"termmap", "layout", "--from", tm.string(), "--seed", "2", "--out", relaid.string()}).code == 0);
  CHECK(slurp(relaid / "termmap.csv") == slurp(tm / "termmap.csv"));

  const auto ov = scratch("ov");
  REQUIRE(run({"overlay", "--snapshot", snapshot(), "--termmap", (tm / "termmap.csv").string(), "--max-len", "3",
               "--out", ov.string()}).code == 0);
  CHECK(fs::exists(ov / "overlay_tweet.csv"));
  CHECK(fs::exists(ov / "overlay_news_story.csv"));

  const auto svg = scratch("svg");
  REQUIRE(run({"render", "--termmap", (tm / "termmap.csv").string(), "--overlay", (ov / "overlay_tweet.csv").string(),
               "--out", svg.string()}).code == 0);
  CHECK(slurp(svg / "overlay_map.svg").find("<svg") != std::string::npos);

  const auto hm = scratch("hm");
  REQUIRE(run({"heatmap", "--snapshot", snapshot(), "--platforms", "news_story", "--from", "2016-01", "--to", "2016-06",
               "--out", hm.string()}).code == 0);
  CHECK(slurp(hm / "heatmap_news_story.csv").rfind("phrase,2016-01,2016-02,2016-03,2016-04,2016-05,2016-06,total\n", 0) == 0);
  CHECK(run({"heatmap", "--snapshot", snapshot(), "--platforms", "pin", "--out", scratch("hm_empty").string()}).code == 2);
}
