#pragma once

#include "altmap/community.hpp"
#include "altmap/corpus.hpp"
#include "altmap/termmap.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace altmap {

// ---------------------------------------------------------------------------
// Overlays on the term map

enum class OverlayStatistic { mean, sum };

struct OverlayScore {
  std::string term;
  double value = 0.0;       // mean (or sum) of per-paper platform mention counts
  std::size_t support = 0;  // mentioned papers whose title contains the term

  friend bool operator==(const OverlayScore&, const OverlayScore&) = default;
};

/// Linked mentions of `platform` per publication index.
std::vector<std::uint64_t> platform_counts(const LinkedCorpus& corpus, PlatformKind platform);

/// One score per term-map row with non-zero support, in row order. Supporting
/// papers are the mentioned publications whose title yields the term under
/// `extraction` (the settings the map was built with).
std::vector<OverlayScore> overlay_scores(const TermMap& map, const LinkedCorpus& corpus,
                                         PlatformKind platform,
                                         const TermExtractionConfig& extraction = {},
                                         OverlayStatistic statistic = OverlayStatistic::mean);
/// Throws Error(UnknownPlatform) for an unrecognized token.
std::vector<OverlayScore> overlay_scores(const TermMap& map, const LinkedCorpus& corpus,
                                         std::string_view platform_token,
                                         const TermExtractionConfig& extraction = {},
                                         OverlayStatistic statistic = OverlayStatistic::mean);

/// `term,value,support`.
std::string overlay_csv(const std::vector<OverlayScore>& scores);
/// Throws Error(MalformedRecord).
std::vector<OverlayScore> overlay_from_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Actor rankings

/// Mentions per distinct paper at or above which an actor is repeat-heavy.
inline constexpr double kRepeatHeavyRatio = 50.0;

struct ActorRow {
  std::string actor_id;
  std::string name;
  ActorClass actor_class = ActorClass::twitter;
  std::size_t distinct_papers = 0;
  std::uint64_t total_mentions = 0;

  double ratio() const noexcept {
    return distinct_papers == 0 ? 0.0
                                : static_cast<double>(total_mentions) / static_cast<double>(distinct_papers);
  }
  bool repeat_heavy() const noexcept { return distinct_papers > 0 && ratio() >= kRepeatHeavyRatio; }
};

struct ActorRanking {
  std::vector<ActorRow> rows;

  /// `rank,actor_id,name,class,distinct_papers,total_mentions,repeat_heavy`.
  std::string to_csv() const;
  std::string to_table() const;
};

/// Counts linked mentions from platforms of class `cls`, per actor_id.
/// Ordered by total mentions desc, then distinct papers desc, then actor_id.
/// The display name comes from the actor's latest mention.
ActorRanking top_actors(const LinkedCorpus& corpus, ActorClass cls, std::size_t n);

// ---------------------------------------------------------------------------
// Account labels and bot share

enum class AccountType { bot, academic, journal, press, professional, company, physician, unknown };
enum class LabelSource { manual, heuristic };

std::string_view token(AccountType t);
std::optional<AccountType> account_type_from_token(std::string_view tok) noexcept;
std::string_view token(LabelSource s);

struct AccountLabel {
  std::string actor_id;
  AccountType type = AccountType::unknown;
  LabelSource source = LabelSource::heuristic;

  friend bool operator==(const AccountLabel&, const AccountLabel&) = default;
};

/// CSV `actor_id,type` with an optional header line of exactly that text.
/// Throws Error(MalformedLabelFile) on bad rows, unknown types or an actor
/// listed twice.
std::map<std::string, AccountType> parse_label_file(std::string_view text);

struct ActorSignals {
  std::string name;
  std::optional<double> following_count;
  std::optional<double> lifetime_post_count;
  std::uint64_t mentions = 0;
  std::size_t distinct_papers = 0;
};

/// Name ends in "papers" (any case, '@' ignored), or following <= 15 with
/// >= 10000 lifetime posts, or a repeat-heavy mention ratio.
bool looks_like_bot(const ActorSignals& signals, std::string_view actor_id);

/// One label per actor_id in the corpus, sorted by actor_id. Manual labels
/// win; heuristics only run when enabled; everything else is unknown.
std::vector<AccountLabel> classify_accounts(const LinkedCorpus& corpus,
                                            const std::map<std::string, AccountType>& manual,
                                            bool heuristics_enabled);
/// Reads the label file (if any). Throws Error(MalformedLabelFile) or
/// Error(FileUnreadable).
std::vector<AccountLabel> classify_accounts(const LinkedCorpus& corpus,
                                            const std::optional<std::string>& manual_labels_file,
                                            bool heuristics_enabled);

std::string labels_csv(const std::vector<AccountLabel>& labels);

struct BotShare {
  double tweet_share = 0.0;  // percent
  double paper_share = 0.0;  // percent
  std::uint64_t bot_tweets = 0;
  std::uint64_t total_tweets = 0;
  std::size_t bot_papers = 0;
  std::size_t tweeted_papers = 0;

  std::string to_text() const;
};

/// Over linked tweets. `scope` limits which bot-labeled actors count; nullopt
/// means every actor.
BotShare bot_share(const LinkedCorpus& corpus, const std::vector<AccountLabel>& labels,
                   const std::optional<std::set<std::string>>& scope = std::nullopt);

// ---------------------------------------------------------------------------
// Phrase heatmap

struct MonthRange {
  std::chrono::year_month first;
  std::chrono::year_month last;  // inclusive

  /// Throws Error(EmptyRange) when last precedes first.
  std::vector<std::chrono::year_month> months() const;
};

/// "YYYY-MM"; nullopt when malformed.
std::optional<std::chrono::year_month> parse_year_month(std::string_view text) noexcept;
std::string format_year_month(std::chrono::year_month ym);

enum class HeatmapCell { papers, mentions };

struct PhraseHeatmap {
  std::vector<std::string> phrases;
  std::vector<std::chrono::year_month> months;
  std::vector<std::vector<std::uint64_t>> cells;  // [phrase][month]
  std::vector<std::uint64_t> row_totals;
  /// Distinct papers behind each phrase's rank.
  std::vector<std::size_t> ranking_papers;

  std::string to_csv() const;
  std::string to_table() const;
};

/// Month span of the linked mentions of `platform`. Throws Error(EmptyRange)
/// when there are none.
MonthRange platform_month_span(const LinkedCorpus& corpus, PlatformKind platform);

/// Rows: the top_n phrases by number of distinct papers with at least one
/// platform mention inside the range (ties by phrase). Cell: distinct papers
/// containing the phrase mentioned on the platform that month, or the number
/// of such mentions. Throws Error(EmptyRange).
PhraseHeatmap noun_phrase_heatmap(const LinkedCorpus& corpus, PlatformKind platform,
                                  std::size_t top_n, const MonthRange& range,
                                  const TermExtractionConfig& extraction = {},
                                  HeatmapCell cell = HeatmapCell::papers);

// ---------------------------------------------------------------------------
// SVG

using MapColoring = std::variant<Partition, std::vector<OverlayScore>>;

/// Circles at the raw layout coordinates (viewBox in layout units), radius
/// and label size growing with log doc_frequency. Partition mode colors by
/// the TermMap's own cluster column when the partition is empty, otherwise
/// by partition.assignment; overlay mode maps log(1 + value) onto a
/// sequential ramp, terms without a positive score in neutral gray.
std::string render_svg(const TermMap& map, const MapColoring& coloring);
/// Throws Error(IoError).
void render_svg(const TermMap& map, const MapColoring& coloring, const std::string& path);

}  // namespace altmap
