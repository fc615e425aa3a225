#pragma once

#include "altmap/records.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace altmap {

struct LinkedMention {
  MentionRecord record;
  /// Index into LinkedCorpus::publications() when the DOI matched.
  std::optional<std::size_t> publication;

  bool linked() const noexcept { return publication.has_value(); }
};

struct ActorMentionRef {
  PlatformKind platform;
  Doi doi;
  std::string mention_id;

  friend auto operator<=>(const ActorMentionRef&, const ActorMentionRef&) = default;
  friend bool operator==(const ActorMentionRef&, const ActorMentionRef&) = default;
};

using ActorIndex = std::map<std::string, std::set<ActorMentionRef>>;

/// Publications joined to their mentions on DOI. Immutable once built; safe
/// for concurrent readers.
class LinkedCorpus {
 public:
  LinkedCorpus() = default;

  const std::vector<PublicationRecord>& publications() const noexcept { return publications_; }
  const std::vector<LinkedMention>& mentions() const noexcept { return mentions_; }
  /// actor_id -> everything that actor mentioned (linked or not).
  const ActorIndex& actors() const noexcept { return actors_; }

  std::optional<std::size_t> publication_index(const Doi& doi) const;

  std::size_t linked_mention_count() const noexcept { return linked_count_; }
  std::size_t unlinked_mention_count() const noexcept { return mentions_.size() - linked_count_; }
  /// Cardinality of the set of publications with at least one linked mention.
  std::size_t distinct_mentioned_publications() const noexcept { return distinct_mentioned_; }
  /// Per publication, whether any linked mention targets it.
  const std::vector<bool>& mentioned_flags() const noexcept { return mentioned_; }

  static ActorIndex build_actor_index(std::span<const LinkedMention> mentions);

 private:
  friend LinkedCorpus link_corpus(std::vector<PublicationRecord>, std::vector<MentionRecord>);

  std::vector<PublicationRecord> publications_;
  std::vector<LinkedMention> mentions_;
  std::unordered_map<std::string, std::size_t> by_doi_;
  ActorIndex actors_;
  std::vector<bool> mentioned_;
  std::size_t linked_count_ = 0;
  std::size_t distinct_mentioned_ = 0;
};

/// Joins mentions to DOI-bearing publications. The first publication wins
/// when DOIs repeat; unmatched mentions are kept but flagged unlinked.
LinkedCorpus link_corpus(std::vector<PublicationRecord> pubs, std::vector<MentionRecord> mentions);

}  // namespace altmap
