#include "altmap/error.hpp"
#include "altmap/ingest.hpp"
#include "altmap/store.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>

using namespace altmap;
using namespace testsupport;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

void check_same_stats(const LinkedCorpus& a, const LinkedCorpus& b) {
  CHECK(platform_stats(a).to_csv() == platform_stats(b).to_csv());
  CHECK(coverage_stats(a).to_text() == coverage_stats(b).to_text());
  CHECK(a.actors() == b.actors());
}

}  // namespace

TEST_CASE("share_tenths rounds half up on exact integers") {
  CHECK(share_tenths(1345909, 1594856) == 844);
  CHECK(share_tenths(156912, 174799) == 898);
  CHECK(share_tenths(1, 8) == 125);    // 12.5 exactly
  CHECK(share_tenths(1, 16) == 63);    // 6.25 -> 6.3
  CHECK(share_tenths(1, 3) == 333);
  CHECK(share_tenths(0, 0) == 0);
  CHECK(format_tenths(844) == "84.4");
  CHECK(format_tenths(1000) == "100.0");
  CHECK(format_tenths(5) == "0.5");
}

TEST_CASE("platform stats from descriptive-table counts") {
  std::array<std::uint64_t, kPlatformCount> mentions{}, papers{};
  mentions[index_of(PlatformKind::tweet)] = 1345909;
  papers[index_of(PlatformKind::tweet)] = 156912;
  mentions[index_of(PlatformKind::news_story)] = 1594856 - 1345909;
  papers[index_of(PlatformKind::news_story)] = 16529;
  const auto stats = PlatformStats::from_counts(mentions, papers, 174799);
  CHECK(stats.total_mentions == 1594856);
  CHECK(stats.row(PlatformKind::tweet).mention_share_tenths == 844);
  CHECK(stats.row(PlatformKind::tweet).mentioned_paper_share_tenths == 898);
  CHECK(stats.row(PlatformKind::tweet).mention_share == doctest::Approx(84.391).epsilon(1e-4));
  CHECK(stats.row(PlatformKind::news_story).mentioned_paper_share_tenths == 95);
}

TEST_CASE("platform stats: single pin mention") {
  const auto corpus = link_corpus({publication("10.1/a", "A")}, {mention("1", PlatformKind::pin, "p", "10.1/a")});
  const auto stats = platform_stats(corpus);
  for (const auto p : kAllPlatforms) {
    const auto& r = stats.row(p);
    if (p == PlatformKind::pin) {
      CHECK(r.mention_count == 1);
      CHECK(r.mention_share_tenths == 1000);
      CHECK(r.mentioned_paper_count == 1);
      CHECK(r.mentioned_paper_share_tenths == 1000);
    } else {
      CHECK(r.mention_count == 0);
      CHECK(r.mention_share == 0.0);
      CHECK(r.mentioned_paper_count == 0);
    }
  }
}

TEST_CASE("platform stats: empty corpus has zero shares") {
  const auto stats = platform_stats(LinkedCorpus{});
  CHECK(stats.total_mentions == 0);
  for (const auto& r : stats.rows) CHECK(r.mention_share == 0.0);
  CHECK(stats.to_table().find("Total") != std::string::npos);
}

TEST_CASE("platform stats: identities on random corpora") {
  Gen g(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_corpus(g, 1 + g.below(60), g.below(300));
    const auto corpus = link_corpus(c.pubs, c.mentions);
    const auto stats = platform_stats(corpus);
    std::uint64_t sum = 0;
    std::int64_t tenths = 0;
    for (const auto& r : stats.rows) {
      sum += r.mention_count;
      tenths += r.mention_share_tenths;
      CHECK(r.mentioned_paper_count <= r.mention_count);
    }
    CHECK(sum == corpus.linked_mention_count());
    if (sum > 0) CHECK(std::abs(tenths - 1000) <= 16);
    CHECK(stats.total_mentioned_papers == corpus.distinct_mentioned_publications());

    std::shuffle(c.mentions.begin(), c.mentions.end(), g.engine());
    CHECK(platform_stats(link_corpus(c.pubs, c.mentions)).to_csv() == stats.to_csv());
  }
}

TEST_CASE("coverage stats: 10 pubs, 8 with DOI, 5 mentioned") {
  std::vector<PublicationRecord> pubs;
  for (int i = 0; i < 10; ++i) pubs.push_back(publication(i < 8 ? doi_of(i) : "", "T"));
  std::vector<MentionRecord> ms;
  for (int i = 0; i < 5; ++i) ms.push_back(mention(std::to_string(i), PlatformKind::tweet, "a", doi_of(i)));
  const auto cov = coverage_stats(link_corpus(pubs, ms));
  CHECK(cov.total_publications == 10);
  CHECK(cov.publications_with_doi == 8);
  CHECK(cov.doi_percent == doctest::Approx(80.0));
  CHECK(cov.distinct_mentioned == 5);
  CHECK(cov.mentioned_percent == doctest::Approx(62.5));

  const auto none = coverage_stats(link_corpus({publication("", "x"), publication("", "y")}, {}));
  CHECK(none.doi_percent == 0.0);
  CHECK(none.distinct_mentioned == 0);
}

TEST_CASE("snapshot round trip of the 100-line fixture") {
  auto parsed = parse_mentions_file(std::string(ALTMAP_TEST_DATA) + "/mentions_100.jsonl");
  std::vector<PublicationRecord> pubs;
  for (int i = 0; i < 25; ++i) pubs.push_back(publication("10.1000/fixture." + std::to_string(i), "Paper"));
  const auto corpus = link_corpus(pubs, parsed.records);
  const auto bytes = serialize_snapshot(corpus);
  const auto back = deserialize_snapshot(bytes);
  check_same_stats(corpus, back);
  CHECK(serialize_snapshot(back) == bytes);

  const auto path = (std::filesystem::path(ALTMAP_BINARY_DIR) / "roundtrip.snapshot").string();
  save_snapshot(corpus, path);
  check_same_stats(corpus, load_snapshot(path));
}

TEST_CASE("snapshot round trip is a fixpoint on random corpora") {
  Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_corpus(g, 30, 120);
    c.mentions[0].actor_meta = {{"following_count", "3"}, {"note", "tab\there \"quoted\""}};
    c.pubs[0].title = "Title with \"quotes\", commas; and unicode \xc3\xa9";
    const auto corpus = link_corpus(c.pubs, c.mentions);
    const auto once = serialize_snapshot(corpus);
    const auto back = deserialize_snapshot(once);
    CHECK(serialize_snapshot(back) == once);
    CHECK(back.publications() == corpus.publications());
    check_same_stats(corpus, back);
  }
}

TEST_CASE("snapshot corruption and version errors") {
  const auto corpus = link_corpus({publication("10.1/a", "A")}, {mention("1", PlatformKind::tweet, "x", "10.1/a")});
  const auto bytes = serialize_snapshot(corpus);
  CHECK(kind_of([&] { deserialize_snapshot(bytes.substr(0, bytes.size() / 2)); }) == ErrorKind::SnapshotCorrupt);
  auto flipped = bytes;
  flipped[bytes.find("\"A\"") + 1] = 'B';
  CHECK(kind_of([&] { deserialize_snapshot(flipped); }) == ErrorKind::SnapshotCorrupt);
  auto versioned = bytes;
  versioned.replace(versioned.find("version 1"), 9, "version 9");
  CHECK(kind_of([&] { deserialize_snapshot(versioned); }) == ErrorKind::VersionMismatch);
  CHECK(kind_of([&] { deserialize_snapshot("hello"); }) == ErrorKind::SnapshotCorrupt);
  CHECK(kind_of([&] { load_snapshot("/nonexistent/dir/x.snapshot"); }) == ErrorKind::FileUnreadable);
}
