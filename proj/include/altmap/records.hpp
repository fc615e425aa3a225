#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace altmap {

/// Canonical DOI: lowercase, no resolver prefix, shape "10.<registrant>/<suffix>".
/// Non-empty values only come from normalize_doi().
class Doi {
 public:
  /// Empty placeholder; never produced by normalize_doi().
  Doi() = default;

  const std::string& value() const noexcept { return value_; }

  friend auto operator<=>(const Doi&, const Doi&) = default;
  friend bool operator==(const Doi&, const Doi&) = default;

 private:
  explicit Doi(std::string v) : value_(std::move(v)) {}
  friend Doi normalize_doi(std::string_view raw);
  friend std::optional<Doi> try_normalize_doi(std::string_view raw) noexcept;

  std::string value_;
};

/// Strips "doi:" and doi.org resolver prefixes, trims and lowercases.
/// Throws Error(NotADoi) when the remainder is not shaped like "10.x/y".
Doi normalize_doi(std::string_view raw);

/// Non-throwing variant of normalize_doi().
std::optional<Doi> try_normalize_doi(std::string_view raw) noexcept;

enum class PlatformKind : std::uint8_t {
  tweet,
  news_story,
  facebook_post,
  blog_post,
  patent,
  googleplus_post,
  wikipedia_page,
  policy_document,
  f1000_post,
  reddit_post,
  peer_review,
  weibo_post,
  video,
  qa_post,
  pin,
  linkedin_post,
};

inline constexpr std::size_t kPlatformCount = 16;

/// All platforms in display order (the order of the descriptive table).
inline constexpr std::array<PlatformKind, kPlatformCount> kAllPlatforms = {
    PlatformKind::tweet,          PlatformKind::news_story,      PlatformKind::facebook_post,
    PlatformKind::blog_post,      PlatformKind::patent,          PlatformKind::googleplus_post,
    PlatformKind::wikipedia_page, PlatformKind::policy_document, PlatformKind::f1000_post,
    PlatformKind::reddit_post,    PlatformKind::peer_review,     PlatformKind::weibo_post,
    PlatformKind::video,          PlatformKind::qa_post,         PlatformKind::pin,
    PlatformKind::linkedin_post,
};

std::string_view token(PlatformKind p);
std::string_view display_name(PlatformKind p);
std::optional<PlatformKind> platform_from_token(std::string_view tok) noexcept;
/// Throws Error(UnknownPlatform).
PlatformKind parse_platform(std::string_view tok);
inline std::size_t index_of(PlatformKind p) { return static_cast<std::size_t>(p); }

/// Actor role used for node classes of the attention graph. Platforms other
/// than tweets, news and policy documents map to `other`.
enum class ActorClass : std::uint8_t { twitter, news, policy, other };

ActorClass actor_class_of(PlatformKind p);
std::string_view token(ActorClass c);
/// Throws Error(InvalidConfig) for unknown tokens.
ActorClass parse_actor_class(std::string_view tok);

using Timestamp = std::chrono::sys_seconds;

/// RFC 3339 date-time ("2016-03-01T12:00:00Z", offsets and fractions allowed).
/// Fractional seconds are truncated. Returns nullopt when unparseable.
std::optional<Timestamp> parse_rfc3339(std::string_view text) noexcept;
std::string format_rfc3339(Timestamp ts);

struct PublicationRecord {
  std::optional<Doi> doi;
  std::string title;
  int year = 0;
  std::string source;
  std::vector<std::string> categories;  // sorted, unique

  friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct MentionRecord {
  std::string mention_id;
  PlatformKind platform = PlatformKind::tweet;
  std::string actor_id;
  std::string actor_name;
  std::map<std::string, std::string> actor_meta;
  Doi doi;
  Timestamp timestamp{};

  std::optional<double> meta_number(std::string_view key) const;

  friend bool operator==(const MentionRecord&, const MentionRecord&) = default;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_without_doi = 0;
  std::size_t rows_malformed = 0;
  std::size_t duplicate_keys = 0;

  bool reconciles() const noexcept {
    return rows_read == rows_accepted + rows_without_doi + rows_malformed + duplicate_keys;
  }
  IngestReport& operator+=(const IngestReport& o) noexcept;
  friend bool operator==(const IngestReport&, const IngestReport&) = default;

  /// Flat `key=value` lines.
  std::string to_text() const;
  /// Single-line JSON object.
  std::string to_json() const;
};

}  // namespace altmap
