#include "altmap/records.hpp"

#include "altmap/error.hpp"
#include "altmap/util.hpp"

#include <charconv>
#include <cstdio>

namespace altmap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotADoi: return "NotADoi";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::FileUnreadable: return "FileUnreadable";
    case ErrorKind::SnapshotCorrupt: return "SnapshotCorrupt";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::InvalidFraction: return "InvalidFraction";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::UnknownPlatform: return "UnknownPlatform";
    case ErrorKind::MalformedLabelFile: return "MalformedLabelFile";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_io_error(ErrorKind kind) {
  return kind == ErrorKind::FileUnreadable || kind == ErrorKind::IoError;
}

// ---------------------------------------------------------------------------
// DOI

namespace {

constexpr std::string_view kDoiPrefixes[] = {
    "https://dx.doi.org/", "http://dx.doi.org/", "https://doi.org/", "http://doi.org/", "doi:",
};

bool doi_shape_ok(std::string_view s) {
  if (s.size() < 3 || s.substr(0, 3) != "10.") return false;
  const auto slash = s.find('/');
  if (slash == std::string_view::npos || slash == 3 || slash + 1 == s.size()) return false;
  for (unsigned char c : s) {
    if (c <= 0x20 || c == 0x7f) return false;
  }
  return true;
}

std::optional<std::string> canonical_doi(std::string_view raw) {
  std::string_view s = util::trim(raw);
  for (auto prefix : kDoiPrefixes) {
    if (util::starts_with_icase(s, prefix)) {
      s = util::trim(s.substr(prefix.size()));
      break;
    }
  }
  std::string lowered = util::to_lower_ascii(s);
  if (!doi_shape_ok(lowered)) return std::nullopt;
  return lowered;
}

}  // namespace

std::optional<Doi> try_normalize_doi(std::string_view raw) noexcept {
  auto canon = canonical_doi(raw);
  if (!canon) return std::nullopt;
  return Doi(std::move(*canon));
}

Doi normalize_doi(std::string_view raw) {
  auto canon = canonical_doi(raw);
  if (!canon) throw Error(ErrorKind::NotADoi, "'" + std::string(raw) + "'");
  return Doi(std::move(*canon));
}

// ---------------------------------------------------------------------------
// Platforms

namespace {

struct PlatformInfo {
  std::string_view token;
  std::string_view display;
};

constexpr PlatformInfo kPlatformInfo[kPlatformCount] = {
    {"tweet", "Tweet"},
    {"news_story", "News story"},
    {"facebook_post", "Facebook post"},
    {"blog_post", "Blog post"},
    {"patent", "Patent"},
    {"googleplus_post", "Google+ post"},
    {"wikipedia_page", "Wikipedia page"},
    {"policy_document", "Policy document"},
    {"f1000_post", "F1000 post"},
    {"reddit_post", "Reddit post"},
    {"peer_review", "Peer review"},
    {"weibo_post", "Weibo post"},
    {"video", "Video"},
    {"qa_post", "Q&A post"},
    {"pin", "Pin"},
    {"linkedin_post", "LinkedIn post"},
};

}  // namespace

std::string_view token(PlatformKind p) { return kPlatformInfo[index_of(p)].token; }
std::string_view display_name(PlatformKind p) { return kPlatformInfo[index_of(p)].display; }

std::optional<PlatformKind> platform_from_token(std::string_view tok) noexcept {
  for (std::size_t i = 0; i < kPlatformCount; ++i) {
    if (kPlatformInfo[i].token == tok) return kAllPlatforms[i];
  }
  return std::nullopt;
}

PlatformKind parse_platform(std::string_view tok) {
  if (auto p = platform_from_token(tok)) return *p;
  throw Error(ErrorKind::UnknownPlatform, "'" + std::string(tok) + "'");
}

ActorClass actor_class_of(PlatformKind p) {
  switch (p) {
    case PlatformKind::tweet: return ActorClass::twitter;
    case PlatformKind::news_story: return ActorClass::news;
    case PlatformKind::policy_document: return ActorClass::policy;
    default: return ActorClass::other;
  }
}

std::string_view token(ActorClass c) {
  switch (c) {
    case ActorClass::twitter: return "twitter";
    case ActorClass::news: return "news";
    case ActorClass::policy: return "policy";
    case ActorClass::other: return "other";
  }
  return "other";
}

ActorClass parse_actor_class(std::string_view tok) {
  for (auto c : {ActorClass::twitter, ActorClass::news, ActorClass::policy, ActorClass::other}) {
    if (token(c) == tok) return c;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown actor class '" + std::string(tok) + "'");
}

// ---------------------------------------------------------------------------
// Timestamps

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return true;
}

}  // namespace

std::optional<Timestamp> parse_rfc3339(std::string_view s) noexcept {
  using namespace std::chrono;
  s = util::trim(s);
  int y, mo, d, h, mi, sec;
  if (!read_int(s, 0, 4, y) || s.size() < 20 || s[4] != '-' || !read_int(s, 5, 2, mo) ||
      s[7] != '-' || !read_int(s, 8, 2, d))
    return std::nullopt;
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  if (!read_int(s, 11, 2, h) || s[13] != ':' || !read_int(s, 14, 2, mi) || s[16] != ':' ||
      !read_int(s, 17, 2, sec))
    return std::nullopt;
  if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }
  if (pos >= s.size()) return std::nullopt;
  int offset_minutes = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (!read_int(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !read_int(s, pos + 4, 2, om) || oh > 23 || om > 59)
      return std::nullopt;
    offset_minutes = (oh * 60 + om) * (s[pos] == '-' ? -1 : 1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  const sys_seconds local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
  return local - minutes{offset_minutes};
}

std::string format_rfc3339(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

// ---------------------------------------------------------------------------

std::optional<double> MentionRecord::meta_number(std::string_view key) const {
  const auto it = actor_meta.find(std::string(key));
  if (it == actor_meta.end()) return std::nullopt;
  const std::string_view v = util::trim(it->second);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

IngestReport& IngestReport::operator+=(const IngestReport& o) noexcept {
  rows_read += o.rows_read;
  rows_accepted += o.rows_accepted;
  rows_without_doi += o.rows_without_doi;
  rows_malformed += o.rows_malformed;
  duplicate_keys += o.duplicate_keys;
  return *this;
}

std::string IngestReport::to_text() const {
  std::string out;
  out += "rows_read=" + std::to_string(rows_read) + "\n";
  out += "rows_accepted=" + std::to_string(rows_accepted) + "\n";
  out += "rows_without_doi=" + std::to_string(rows_without_doi) + "\n";
  out += "rows_malformed=" + std::to_string(rows_malformed) + "\n";
  out += "duplicate_keys=" + std::to_string(duplicate_keys) + "\n";
  return out;
}

std::string IngestReport::to_json() const {
  return "{\"duplicate_keys\":" + std::to_string(duplicate_keys) +
         ",\"rows_accepted\":" + std::to_string(rows_accepted) +
         ",\"rows_malformed\":" + std::to_string(rows_malformed) +
         ",\"rows_read\":" + std::to_string(rows_read) +
         ",\"rows_without_doi\":" + std::to_string(rows_without_doi) + "}";
}

}  // namespace altmap
