#include "altmap/store.hpp"

#include "altmap/error.hpp"
#include "altmap/ingest.hpp"
#include "altmap/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <unordered_set>

namespace altmap {

std::int64_t share_tenths(std::uint64_t part, std::uint64_t whole) noexcept {
  if (whole == 0) return 0;
  return static_cast<std::int64_t>((2000 * part + whole) / (2 * whole));
}

std::string format_tenths(std::int64_t tenths) {
  const bool neg = tenths < 0;
  const auto mag = neg ? -tenths : tenths;
  return (neg ? "-" : "") + std::to_string(mag / 10) + "." + std::to_string(mag % 10);
}

PlatformStats PlatformStats::from_counts(const std::array<std::uint64_t, kPlatformCount>& mentions,
                                         const std::array<std::uint64_t, kPlatformCount>& papers,
                                         std::uint64_t distinct_papers) {
  PlatformStats s;
  for (auto m : mentions) s.total_mentions += m;
  s.total_mentioned_papers = distinct_papers;
  for (std::size_t i = 0; i < kPlatformCount; ++i) {
    auto& r = s.rows[i];
    r.platform = kAllPlatforms[i];
    r.mention_count = mentions[i];
    r.mentioned_paper_count = papers[i];
    r.mention_share = s.total_mentions ? 100.0 * static_cast<double>(mentions[i]) /
                                             static_cast<double>(s.total_mentions)
                                       : 0.0;
    r.mentioned_paper_share = distinct_papers ? 100.0 * static_cast<double>(papers[i]) /
                                                    static_cast<double>(distinct_papers)
                                              : 0.0;
    r.mention_share_tenths = share_tenths(mentions[i], s.total_mentions);
    r.mentioned_paper_share_tenths = share_tenths(papers[i], distinct_papers);
  }
  return s;
}

PlatformStats platform_stats(const LinkedCorpus& corpus) {
  std::array<std::uint64_t, kPlatformCount> mentions{};
  std::array<std::uint64_t, kPlatformCount> papers{};
  // Per platform, mark publications already counted.
  std::vector<std::array<bool, kPlatformCount>> seen(corpus.publications().size());
  for (const auto& m : corpus.mentions()) {
    if (!m.linked()) continue;
    const auto p = index_of(m.record.platform);
    ++mentions[p];
    auto& flag = seen[*m.publication][p];
    if (!flag) {
      flag = true;
      ++papers[p];
    }
  }
  return PlatformStats::from_counts(mentions, papers, corpus.distinct_mentioned_publications());
}

std::string PlatformStats::to_table() const {
  const std::vector<std::string> header = {"Platforms", "Mentions", "Share of mentions",
                                           "Number of mentioned papers",
                                           "Share of mentioned papers"};
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    body.push_back({std::string(display_name(r.platform)), std::to_string(r.mention_count),
                    format_tenths(r.mention_share_tenths), std::to_string(r.mentioned_paper_count),
                    format_tenths(r.mentioned_paper_share_tenths)});
  }
  body.push_back({"Total", std::to_string(total_mentions), total_mentions ? "100.0" : "0.0",
                  std::to_string(total_mentioned_papers), total_mentioned_papers ? "100.0" : "0.0"});

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : body) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  const auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto pad = std::string(width[c] - row[c].size(), ' ');
      out += c == 0 ? row[c] + pad : pad + row[c];
      out += c + 1 < row.size() ? "  " : "\n";
    }
  };
  emit(header);
  for (const auto& row : body) emit(row);
  return out;
}

std::string PlatformStats::to_csv() const {
  std::string out =
      "platform,mentions,mention_share,mentioned_papers,mentioned_paper_share\n";
  for (const auto& r : rows) {
    out += std::string(token(r.platform)) + "," + std::to_string(r.mention_count) + "," +
           format_tenths(r.mention_share_tenths) + "," + std::to_string(r.mentioned_paper_count) +
           "," + format_tenths(r.mentioned_paper_share_tenths) + "\n";
  }
  out += "total," + std::to_string(total_mentions) + "," + (total_mentions ? "100.0" : "0.0") +
         "," + std::to_string(total_mentioned_papers) + "," +
         (total_mentioned_papers ? "100.0" : "0.0") + "\n";
  return out;
}

CoverageReport coverage_stats(const LinkedCorpus& corpus) {
  CoverageReport r;
  r.total_publications = corpus.publications().size();
  for (const auto& p : corpus.publications()) {
    if (p.doi) ++r.publications_with_doi;
  }
  r.distinct_mentioned = corpus.distinct_mentioned_publications();
  r.doi_percent = r.total_publications ? 100.0 * static_cast<double>(r.publications_with_doi) /
                                             static_cast<double>(r.total_publications)
                                       : 0.0;
  r.mentioned_percent = r.publications_with_doi
                            ? 100.0 * static_cast<double>(r.distinct_mentioned) /
                                  static_cast<double>(r.publications_with_doi)
                            : 0.0;
  return r;
}

std::string CoverageReport::to_text() const {
  return "total_publications=" + std::to_string(total_publications) +
         "\npublications_with_doi=" + std::to_string(publications_with_doi) +
         "\ndoi_percent=" + util::format_fixed(doi_percent, 1) +
         "\ndistinct_mentioned=" + std::to_string(distinct_mentioned) +
         "\nmentioned_percent=" + util::format_fixed(mentioned_percent, 1) + "\n";
}

// ---------------------------------------------------------------------------
// Snapshot

namespace {

constexpr std::string_view kMagic = "ALTMAP-SNAPSHOT";

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorKind::SnapshotCorrupt, why); }

std::string publication_json(const PublicationRecord& p) {
  nlohmann::json j = {
      {"doi", p.doi ? nlohmann::json(p.doi->value()) : nlohmann::json(nullptr)},
      {"title", p.title},
      {"year", p.year},
      {"source", p.source},
      {"categories", p.categories},
  };
  return j.dump();
}

PublicationRecord publication_from_json(std::string_view line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) corrupt("bad publication record");
  try {
    PublicationRecord p;
    if (!j.at("doi").is_null()) {
      p.doi = try_normalize_doi(j.at("doi").get<std::string>());
      if (!p.doi) corrupt("bad DOI in publication record");
    }
    p.title = j.at("title").get<std::string>();
    p.year = j.at("year").get<int>();
    p.source = j.at("source").get<std::string>();
    p.categories = j.at("categories").get<std::vector<std::string>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("bad publication record: ") + e.what());
  }
}

// Consumes "<key> <integer>\n" at `pos`.
std::size_t read_count_line(std::string_view body, std::size_t& pos, std::string_view key) {
  const auto end = body.find('\n', pos);
  if (end == std::string_view::npos) corrupt("truncated header");
  const auto line = body.substr(pos, end - pos);
  pos = end + 1;
  if (line.size() <= key.size() + 1 || line.substr(0, key.size()) != key ||
      line[key.size()] != ' ')
    corrupt("expected '" + std::string(key) + "' line");
  std::size_t value = 0;
  const auto digits = line.substr(key.size() + 1);
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) corrupt("bad count");
  return value;
}

std::string_view read_line(std::string_view body, std::size_t& pos) {
  const auto end = body.find('\n', pos);
  if (end == std::string_view::npos) corrupt("truncated record block");
  const auto line = body.substr(pos, end - pos);
  pos = end + 1;
  return line;
}

}  // namespace

std::string serialize_snapshot(const LinkedCorpus& corpus) {
  std::string body;
  body += kMagic;
  body += "\nversion " + std::to_string(kSnapshotVersion) + "\n";
  body += "publications " + std::to_string(corpus.publications().size()) + "\n";
  for (const auto& p : corpus.publications()) body += publication_json(p) + "\n";
  body += "mentions " + std::to_string(corpus.mentions().size()) + "\n";
  for (const auto& m : corpus.mentions()) body += to_json_line(m.record) + "\n";
  body += "checksum " + util::hex64(util::fnv1a64(body)) + "\n";
  return body;
}

LinkedCorpus deserialize_snapshot(std::string_view bytes) {
  std::size_t pos = 0;
  if (bytes.substr(0, kMagic.size() + 1) != std::string(kMagic) + "\n") corrupt("missing magic");
  pos = kMagic.size() + 1;

  const auto version_end = bytes.find('\n', pos);
  if (version_end == std::string_view::npos) corrupt("truncated header");
  const auto version_line = bytes.substr(pos, version_end - pos);
  if (version_line.substr(0, 8) != "version ") corrupt("missing version");
  int version = 0;
  const auto vtext = version_line.substr(8);
  const auto vres = std::from_chars(vtext.data(), vtext.data() + vtext.size(), version);
  if (vres.ec != std::errc{} || vres.ptr != vtext.data() + vtext.size()) corrupt("bad version");
  if (version != kSnapshotVersion) {
    throw Error(ErrorKind::VersionMismatch, "snapshot version " + std::to_string(version) +
                                                ", expected " + std::to_string(kSnapshotVersion));
  }
  pos = version_end + 1;

  // Trailer: last line "checksum <16 hex>".
  constexpr std::string_view kTrailer = "checksum ";
  if (bytes.size() < kTrailer.size() + 17 || bytes.back() != '\n') corrupt("missing checksum");
  const auto trailer_start = bytes.size() - (kTrailer.size() + 17);
  if (bytes.substr(trailer_start, kTrailer.size()) != kTrailer) corrupt("missing checksum");
  const auto stored = bytes.substr(trailer_start + kTrailer.size(), 16);
  const auto body = bytes.substr(0, trailer_start);
  if (util::hex64(util::fnv1a64(body)) != stored) corrupt("checksum mismatch");

  const std::size_t npubs = read_count_line(body, pos, "publications");
  std::vector<PublicationRecord> pubs;
  pubs.reserve(npubs);
  for (std::size_t i = 0; i < npubs; ++i) pubs.push_back(publication_from_json(read_line(body, pos)));

  const std::size_t nmentions = read_count_line(body, pos, "mentions");
  const auto mention_block = body.substr(pos);
  auto parsed = parse_mentions(mention_block);
  if (parsed.report.rows_read != nmentions || parsed.report.rows_accepted != nmentions) {
    corrupt("mention block does not match its count");
  }
  return link_corpus(std::move(pubs), std::move(parsed.records));
}

void save_snapshot(const LinkedCorpus& corpus, const std::string& path) {
  util::write_file(path, serialize_snapshot(corpus));
}

LinkedCorpus load_snapshot(const std::string& path) {
  return deserialize_snapshot(util::read_file(path));
}

}  // namespace altmap
