#include "altmap/corpus.hpp"

namespace altmap {

std::optional<std::size_t> LinkedCorpus::publication_index(const Doi& doi) const {
  const auto it = by_doi_.find(doi.value());
  if (it == by_doi_.end()) return std::nullopt;
  return it->second;
}

ActorIndex LinkedCorpus::build_actor_index(std::span<const LinkedMention> mentions) {
  ActorIndex index;
  for (const auto& m : mentions) {
    index[m.record.actor_id].insert(
        ActorMentionRef{m.record.platform, m.record.doi, m.record.mention_id});
  }
  return index;
}

LinkedCorpus link_corpus(std::vector<PublicationRecord> pubs, std::vector<MentionRecord> mentions) {
  LinkedCorpus c;
  c.publications_ = std::move(pubs);
  c.by_doi_.reserve(c.publications_.size());
  for (std::size_t i = 0; i < c.publications_.size(); ++i) {
    if (const auto& doi = c.publications_[i].doi) c.by_doi_.emplace(doi->value(), i);
  }

  c.mentioned_.assign(c.publications_.size(), false);
  c.mentions_.reserve(mentions.size());
  for (auto& m : mentions) {
    LinkedMention lm{std::move(m), std::nullopt};
    if (const auto it = c.by_doi_.find(lm.record.doi.value()); it != c.by_doi_.end()) {
      lm.publication = it->second;
      ++c.linked_count_;
      if (!c.mentioned_[it->second]) {
        c.mentioned_[it->second] = true;
        ++c.distinct_mentioned_;
      }
    }
    c.mentions_.push_back(std::move(lm));
  }
  c.actors_ = LinkedCorpus::build_actor_index(c.mentions_);
  return c;
}

}  // namespace altmap
