#pragma once

#include "altmap/records.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace altmap {

struct PublicationParse {
  std::vector<PublicationRecord> records;
  IngestReport report;
};

struct MentionParse {
  std::vector<MentionRecord> records;
  IngestReport report;
};

inline constexpr std::string_view kPublicationHeader = "doi\ttitle\tyear\tsource\tcategories";

// Publications: tab-separated with the header above, categories joined by ';'.
// Rows without a parseable DOI are kept (doi = nullopt) and counted in
// rows_without_doi; a repeated DOI keeps the first row. Malformed rows are
// counted and skipped. A non-empty input without the header throws
// Error(MalformedRow).
//
// Mentions: one JSON object per line with keys mention_id, platform,
// actor_id, actor_name, actor_meta, doi, timestamp. Lines whose DOI is missing
// or unparseable count as rows_without_doi; repeated mention_ids as
// duplicate_keys. Blank lines are ignored entirely.
//
// `threads` > 1 parses line shards concurrently; the merge runs in file order,
// so records and report are identical to a sequential pass.
PublicationParse parse_publications(std::string_view text, unsigned threads = 1);
MentionParse parse_mentions(std::string_view text, unsigned threads = 1);

/// File variants; throw Error(FileUnreadable).
PublicationParse parse_publications_file(const std::string& path, unsigned threads = 1);
MentionParse parse_mentions_file(const std::string& path, unsigned threads = 1);

/// Canonical single-line JSON for a mention, as accepted by parse_mentions().
std::string to_json_line(const MentionRecord& m);
/// Canonical TSV row for a publication, as accepted by parse_publications().
std::string to_tsv_row(const PublicationRecord& p);

}  // namespace altmap
