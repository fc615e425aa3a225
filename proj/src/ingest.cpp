#include "altmap/ingest.hpp"

#include "altmap/error.hpp"
#include "altmap/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <span>
#include <thread>
#include <unordered_set>
#include <variant>

namespace altmap {

namespace {

enum class LineOutcome { malformed, without_doi };

template <typename Record>
using LineResult = std::variant<Record, LineOutcome>;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) { return util::trim(line).empty(); }

// Parses every line with `fn`, optionally across threads. Results are
// positional, so merging them in order is independent of the thread count.
template <typename Record, typename Fn>
std::vector<LineResult<Record>> parse_lines(std::span<const std::string_view> lines,
                                            unsigned threads, Fn fn) {
  std::vector<LineResult<Record>> results(lines.size(), LineOutcome::malformed);
  const std::size_t n = lines.size();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 1024 + 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(lines[i]);
    return results;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) results[i] = fn(lines[i]);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

LineResult<PublicationRecord> parse_publication_row(std::string_view line) {
  const auto cols = util::split(line, '\t');
  if (cols.size() != 5) return LineOutcome::malformed;

  PublicationRecord rec;
  rec.title = std::string(util::trim(cols[1]));
  if (rec.title.empty()) return LineOutcome::malformed;

  const auto year_text = util::trim(cols[2]);
  int year = 0;
  const auto res = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
  if (res.ec != std::errc{} || res.ptr != year_text.data() + year_text.size()) {
    return LineOutcome::malformed;
  }
  if (year < 1900 || year > 2100) return LineOutcome::malformed;
  rec.year = year;
  rec.source = std::string(util::trim(cols[3]));

  for (auto cat : util::split(cols[4], ';')) {
    cat = util::trim(cat);
    if (!cat.empty()) rec.categories.emplace_back(cat);
  }
  std::sort(rec.categories.begin(), rec.categories.end());
  rec.categories.erase(std::unique(rec.categories.begin(), rec.categories.end()),
                       rec.categories.end());

  rec.doi = try_normalize_doi(cols[0]);
  return rec;
}

std::optional<std::string> json_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  return std::nullopt;
}

LineResult<MentionRecord> parse_mention_line(std::string_view line) {
  auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return LineOutcome::malformed;

  MentionRecord rec;
  const auto field = [&](const char* key) -> const nlohmann::json* {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  };

  const auto* id = field("mention_id");
  const auto* platform = field("platform");
  const auto* actor = field("actor_id");
  const auto* ts = field("timestamp");
  if (!id || !platform || !actor || !ts) return LineOutcome::malformed;

  auto id_text = json_text(*id);
  if (!id_text || util::trim(*id_text).empty()) return LineOutcome::malformed;
  rec.mention_id = std::move(*id_text);

  if (!platform->is_string()) return LineOutcome::malformed;
  const auto kind = platform_from_token(platform->get<std::string>());
  if (!kind) return LineOutcome::malformed;
  rec.platform = *kind;

  auto actor_text = json_text(*actor);
  if (!actor_text || util::trim(*actor_text).empty()) return LineOutcome::malformed;
  rec.actor_id = std::move(*actor_text);

  if (const auto* name = field("actor_name"); name && !name->is_null()) {
    if (!name->is_string()) return LineOutcome::malformed;
    rec.actor_name = name->get<std::string>();
  }

  if (const auto* meta = field("actor_meta"); meta && !meta->is_null()) {
    if (!meta->is_object()) return LineOutcome::malformed;
    for (const auto& [k, v] : meta->items()) {
      if (v.is_string()) {
        rec.actor_meta.emplace(k, v.get<std::string>());
      } else if (v.is_number() || v.is_boolean()) {
        rec.actor_meta.emplace(k, v.dump());
      } else if (!v.is_null()) {
        return LineOutcome::malformed;
      }
    }
  }

  if (!ts->is_string()) return LineOutcome::malformed;
  const auto parsed = parse_rfc3339(ts->get<std::string>());
  if (!parsed) return LineOutcome::malformed;
  rec.timestamp = *parsed;

  const auto* doi = field("doi");
  if (!doi || !doi->is_string()) return LineOutcome::without_doi;
  auto canon = try_normalize_doi(doi->get<std::string>());
  if (!canon) return LineOutcome::without_doi;
  rec.doi = std::move(*canon);
  return rec;
}

}  // namespace

PublicationParse parse_publications(std::string_view text, unsigned threads) {
  PublicationParse out;
  auto lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && is_blank(lines[first])) ++first;
  if (first == lines.size()) return out;
  if (util::trim(lines[first]) != kPublicationHeader) {
    throw Error(ErrorKind::MalformedRow, "publications header must be '" +
                                             std::string(kPublicationHeader) + "'");
  }

  std::vector<std::string_view> rows;
  rows.reserve(lines.size() - first);
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (!is_blank(lines[i])) rows.push_back(lines[i]);
  }

  auto results = parse_lines<PublicationRecord>(rows, threads, parse_publication_row);
  std::unordered_set<std::string> seen;
  out.records.reserve(results.size());
  for (auto& r : results) {
    ++out.report.rows_read;
    if (auto* rec = std::get_if<PublicationRecord>(&r)) {
      if (!rec->doi) {
        ++out.report.rows_without_doi;
        out.records.push_back(std::move(*rec));
      } else if (!seen.insert(rec->doi->value()).second) {
        ++out.report.duplicate_keys;
      } else {
        ++out.report.rows_accepted;
        out.records.push_back(std::move(*rec));
      }
    } else {
      ++out.report.rows_malformed;
    }
  }
  return out;
}

MentionParse parse_mentions(std::string_view text, unsigned threads) {
  MentionParse out;
  std::vector<std::string_view> rows;
  for (auto line : split_lines(text)) {
    if (!is_blank(line)) rows.push_back(line);
  }
  auto results = parse_lines<MentionRecord>(rows, threads, parse_mention_line);
  std::unordered_set<std::string> seen;
  out.records.reserve(results.size());
  for (auto& r : results) {
    ++out.report.rows_read;
    if (auto* rec = std::get_if<MentionRecord>(&r)) {
      if (!seen.insert(rec->mention_id).second) {
        ++out.report.duplicate_keys;
      } else {
        ++out.report.rows_accepted;
        out.records.push_back(std::move(*rec));
      }
    } else if (std::get<LineOutcome>(r) == LineOutcome::without_doi) {
      ++out.report.rows_without_doi;
    } else {
      ++out.report.rows_malformed;
    }
  }
  return out;
}

PublicationParse parse_publications_file(const std::string& path, unsigned threads) {
  return parse_publications(util::read_file(path), threads);
}

MentionParse parse_mentions_file(const std::string& path, unsigned threads) {
  return parse_mentions(util::read_file(path), threads);
}

std::string to_json_line(const MentionRecord& m) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : m.actor_meta) meta[k] = v;
  nlohmann::json j = {
      {"mention_id", m.mention_id},
      {"platform", std::string(token(m.platform))},
      {"actor_id", m.actor_id},
      {"actor_name", m.actor_name},
      {"actor_meta", std::move(meta)},
      {"doi", m.doi.value()},
      {"timestamp", format_rfc3339(m.timestamp)},
  };
  return j.dump();
}

std::string to_tsv_row(const PublicationRecord& p) {
  const auto clean = [](std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; },
                    ' ');
    return s;
  };
  std::string cats;
  for (const auto& c : p.categories) {
    if (!cats.empty()) cats += ';';
    cats += clean(c);
  }
  return (p.doi ? p.doi->value() : std::string()) + '\t' + clean(p.title) + '\t' +
         std::to_string(p.year) + '\t' + clean(p.source) + '\t' + cats;
}

}  // namespace altmap
