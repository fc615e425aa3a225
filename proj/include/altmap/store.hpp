#pragma once

#include "altmap/corpus.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace altmap {

/// Percentage rounded half-up to one decimal, kept as an integer count of
/// tenths so display values are exact (844 -> "84.4").
std::int64_t share_tenths(std::uint64_t part, std::uint64_t whole) noexcept;
std::string format_tenths(std::int64_t tenths);

struct PlatformRow {
  PlatformKind platform{};
  std::uint64_t mention_count = 0;
  double mention_share = 0.0;  // percent, unrounded
  std::uint64_t mentioned_paper_count = 0;
  double mentioned_paper_share = 0.0;  // percent of distinct mentioned papers, unrounded

  std::int64_t mention_share_tenths = 0;
  std::int64_t mentioned_paper_share_tenths = 0;
};

struct PlatformStats {
  std::array<PlatformRow, kPlatformCount> rows{};
  std::uint64_t total_mentions = 0;
  std::uint64_t total_mentioned_papers = 0;

  const PlatformRow& row(PlatformKind p) const { return rows[index_of(p)]; }

  /// Builds the table from raw per-platform counts.
  static PlatformStats from_counts(const std::array<std::uint64_t, kPlatformCount>& mentions,
                                   const std::array<std::uint64_t, kPlatformCount>& papers,
                                   std::uint64_t distinct_papers);

  /// Aligned text table: Platforms, Mentions, Share of mentions, Number of
  /// mentioned papers, Share of mentioned papers, plus a Total row.
  std::string to_table() const;
  std::string to_csv() const;
};

/// Counts over linked mentions only.
PlatformStats platform_stats(const LinkedCorpus& corpus);

struct CoverageReport {
  std::uint64_t total_publications = 0;
  std::uint64_t publications_with_doi = 0;
  double doi_percent = 0.0;
  std::uint64_t distinct_mentioned = 0;
  double mentioned_percent = 0.0;  // of DOI-bearing publications

  std::string to_text() const;
};

CoverageReport coverage_stats(const LinkedCorpus& corpus);

inline constexpr int kSnapshotVersion = 1;

/// Versioned, checksummed text snapshot of the corpus. Loading relinks, so
/// the derived actor index is rebuilt rather than stored.
std::string serialize_snapshot(const LinkedCorpus& corpus);
LinkedCorpus deserialize_snapshot(std::string_view bytes);

void save_snapshot(const LinkedCorpus& corpus, const std::string& path);
/// Throws SnapshotCorrupt, VersionMismatch or FileUnreadable.
LinkedCorpus load_snapshot(const std::string& path);

}  // namespace altmap
