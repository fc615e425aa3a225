#include "altmap/overlays.hpp"

#include "altmap/error.hpp"
#include "altmap/util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace altmap {

// ---------------------------------------------------------------------------
// Overlays

std::vector<std::uint64_t> platform_counts(const LinkedCorpus& corpus, PlatformKind platform) {
  std::vector<std::uint64_t> counts(corpus.publications().size(), 0);
  for (const auto& m : corpus.mentions()) {
    if (m.linked() && m.record.platform == platform) ++counts[*m.publication];
  }
  return counts;
}

std::vector<OverlayScore> overlay_scores(const TermMap& map, const LinkedCorpus& corpus,
                                         PlatformKind platform,
                                         const TermExtractionConfig& extraction,
                                         OverlayStatistic statistic) {
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < map.rows.size(); ++r) row_of.emplace(map.rows[r].term, r);

  const auto counts = platform_counts(corpus, platform);
  std::vector<std::uint64_t> sum(map.rows.size(), 0);
  std::vector<std::size_t> support(map.rows.size(), 0);
  const auto& flags = corpus.mentioned_flags();
  for (std::size_t p = 0; p < corpus.publications().size(); ++p) {
    if (!flags[p]) continue;
    for (const auto& phrase : title_phrases(corpus.publications()[p].title, extraction)) {
      const auto it = row_of.find(phrase);
      if (it == row_of.end()) continue;
      sum[it->second] += counts[p];
      ++support[it->second];
    }
  }

  std::vector<OverlayScore> out;
  for (std::size_t r = 0; r < map.rows.size(); ++r) {
    if (support[r] == 0) continue;
    const double total = static_cast<double>(sum[r]);
    out.push_back({map.rows[r].term,
                   statistic == OverlayStatistic::mean ? total / static_cast<double>(support[r]) : total,
                   support[r]});
  }
  return out;
}

std::vector<OverlayScore> overlay_scores(const TermMap& map, const LinkedCorpus& corpus,
                                         std::string_view platform_token,
                                         const TermExtractionConfig& extraction,
                                         OverlayStatistic statistic) {
  return overlay_scores(map, corpus, parse_platform(platform_token), extraction, statistic);
}

std::string overlay_csv(const std::vector<OverlayScore>& scores) {
  std::string out = "term,value,support\n";
  for (const auto& s : scores) {
    out += util::csv_field(s.term) + "," + util::format_double(s.value) + "," +
           std::to_string(s.support) + "\n";
  }
  return out;
}

std::vector<OverlayScore> overlay_from_csv(std::string_view text) {
  std::vector<OverlayScore> out;
  std::vector<std::string> fields;
  bool header = true;
  for (auto line : util::split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (util::trim(line).empty()) continue;
    if (header) {
      header = false;
      if (line != "term,value,support") {
        throw Error(ErrorKind::MalformedRecord, "overlay header must be term,value,support");
      }
      continue;
    }
    if (!util::parse_csv_line(line, fields) || fields.size() != 3) {
      throw Error(ErrorKind::MalformedRecord, "bad overlay row '" + std::string(line) + "'");
    }
    try {
      out.push_back({fields[0], std::stod(fields[1]), static_cast<std::size_t>(std::stoull(fields[2]))});
    } catch (...) {
      throw Error(ErrorKind::MalformedRecord, "bad number in overlay row '" + std::string(line) + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rankings

namespace {

struct ActorTally {
  std::unordered_set<std::size_t> papers;
  std::uint64_t mentions = 0;
  const MentionRecord* latest = nullptr;
};

bool later(const MentionRecord& a, const MentionRecord& b) {
  if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
  return a.mention_id > b.mention_id;
}

// Linked mentions per actor_id, restricted to platforms accepted by `keep`.
template <typename Keep>
std::map<std::string, ActorTally> tally_actors(const LinkedCorpus& corpus, Keep keep) {
  std::map<std::string, ActorTally> tallies;
  for (const auto& m : corpus.mentions()) {
    if (!m.linked() || !keep(m.record.platform)) continue;
    auto& t = tallies[m.record.actor_id];
    t.papers.insert(*m.publication);
    ++t.mentions;
    if (t.latest == nullptr || later(m.record, *t.latest)) t.latest = &m.record;
  }
  return tallies;
}

std::string pad(std::string s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

// Aligned text table; columns flagged numeric are right-aligned.
std::string text_table(const std::vector<std::string>& header, const std::vector<bool>& numeric,
                       const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  const auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += "  ";
      out += pad(cells[c], width[c], numeric[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& row : rows) out += line(row);
  return out;
}

}  // namespace

ActorRanking top_actors(const LinkedCorpus& corpus, ActorClass cls, std::size_t n) {
  const auto tallies =
      tally_actors(corpus, [cls](PlatformKind p) { return actor_class_of(p) == cls; });
  ActorRanking ranking;
  ranking.rows.reserve(tallies.size());
  for (const auto& [id, t] : tallies) {
    const std::string name = t.latest->actor_name.empty() ? id : t.latest->actor_name;
    ranking.rows.push_back({id, name, cls, t.papers.size(), t.mentions});
  }
  std::sort(ranking.rows.begin(), ranking.rows.end(), [](const ActorRow& a, const ActorRow& b) {
    if (a.total_mentions != b.total_mentions) return a.total_mentions > b.total_mentions;
    if (a.distinct_papers != b.distinct_papers) return a.distinct_papers > b.distinct_papers;
    return a.actor_id < b.actor_id;
  });
  if (ranking.rows.size() > n) ranking.rows.resize(n);
  return ranking;
}

std::string ActorRanking::to_csv() const {
  std::string out = "rank,actor_id,name,class,distinct_papers,total_mentions,repeat_heavy\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += std::to_string(i + 1) + "," + util::csv_field(r.actor_id) + "," + util::csv_field(r.name) +
           "," + std::string(token(r.actor_class)) + "," + std::to_string(r.distinct_papers) + "," +
           std::to_string(r.total_mentions) + "," + (r.repeat_heavy() ? "1" : "0") + "\n";
  }
  return out;
}

std::string ActorRanking::to_table() const {
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    cells.push_back({std::to_string(i + 1), r.name, std::to_string(r.distinct_papers),
                     std::to_string(r.total_mentions), util::format_fixed(r.ratio(), 2),
                     r.repeat_heavy() ? "repeat-heavy" : ""});
  }
  return text_table({"Rank", "Actor", "Papers", "Mentions", "Mentions/paper", "Flag"},
                    {true, false, true, true, true, false}, cells);
}

// ---------------------------------------------------------------------------
// Labels

namespace {

constexpr std::array<std::pair<AccountType, std::string_view>, 8> kAccountTypes = {{
    {AccountType::bot, "bot"},
    {AccountType::academic, "academic"},
    {AccountType::journal, "journal"},
    {AccountType::press, "press"},
    {AccountType::professional, "professional"},
    {AccountType::company, "company"},
    {AccountType::physician, "physician"},
    {AccountType::unknown, "unknown"},
}};

}  // namespace

std::string_view token(AccountType t) {
  for (const auto& [type, tok] : kAccountTypes) {
    if (type == t) return tok;
  }
  return "unknown";
}

std::optional<AccountType> account_type_from_token(std::string_view tok) noexcept {
  for (const auto& [type, name] : kAccountTypes) {
    if (name == tok) return type;
  }
  return std::nullopt;
}

std::string_view token(LabelSource s) { return s == LabelSource::manual ? "manual" : "heuristic"; }

std::map<std::string, AccountType> parse_label_file(std::string_view text) {
  std::map<std::string, AccountType> labels;
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  bool first = true;
  for (auto line : util::split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (util::trim(line).empty()) continue;
    const auto where = "label file line " + std::to_string(line_no);
    if (first) {
      first = false;
      if (util::trim(line) == "actor_id,type") continue;
    }
    if (!util::parse_csv_line(line, fields) || fields.size() != 2) {
      throw Error(ErrorKind::MalformedLabelFile, where + ": expected actor_id,type");
    }
    const std::string id{util::trim(fields[0])};
    const auto type = account_type_from_token(util::to_lower_ascii(util::trim(fields[1])));
    if (id.empty()) throw Error(ErrorKind::MalformedLabelFile, where + ": empty actor_id");
    if (!type) {
      throw Error(ErrorKind::MalformedLabelFile, where + ": unknown account type '" + fields[1] + "'");
    }
    if (!labels.emplace(id, *type).second) {
      throw Error(ErrorKind::MalformedLabelFile, where + ": actor '" + id + "' labeled twice");
    }
  }
  return labels;
}

bool looks_like_bot(const ActorSignals& signals, std::string_view actor_id) {
  const auto stripped = [](std::string_view s) {
    s = util::trim(s);
    if (!s.empty() && s.front() == '@') s.remove_prefix(1);
    return s;
  };
  if (util::ends_with_icase(stripped(signals.name), "papers") ||
      util::ends_with_icase(stripped(actor_id), "papers")) {
    return true;
  }
  if (signals.following_count && signals.lifetime_post_count && *signals.following_count <= 15.0 &&
      *signals.lifetime_post_count >= 10000.0) {
    return true;
  }
  return signals.distinct_papers > 0 &&
         static_cast<double>(signals.mentions) / static_cast<double>(signals.distinct_papers) >=
             kRepeatHeavyRatio;
}

std::vector<AccountLabel> classify_accounts(const LinkedCorpus& corpus,
                                            const std::map<std::string, AccountType>& manual,
                                            bool heuristics_enabled) {
  const auto tallies = tally_actors(corpus, [](PlatformKind) { return true; });

  // Latest metadata over all of an actor's mentions, linked or not.
  std::map<std::string, const MentionRecord*> latest;
  for (const auto& m : corpus.mentions()) {
    auto& slot = latest[m.record.actor_id];
    if (slot == nullptr || later(m.record, *slot)) slot = &m.record;
  }

  std::vector<AccountLabel> labels;
  labels.reserve(latest.size());
  for (const auto& [id, record] : latest) {
    if (const auto it = manual.find(id); it != manual.end()) {
      labels.push_back({id, it->second, LabelSource::manual});
      continue;
    }
    AccountType type = AccountType::unknown;
    if (heuristics_enabled) {
      ActorSignals signals;
      signals.name = record->actor_name;
      signals.following_count = record->meta_number("following_count");
      signals.lifetime_post_count = record->meta_number("lifetime_post_count");
      if (const auto t = tallies.find(id); t != tallies.end()) {
        signals.mentions = t->second.mentions;
        signals.distinct_papers = t->second.papers.size();
      }
      if (looks_like_bot(signals, id)) type = AccountType::bot;
    }
    labels.push_back({id, type, LabelSource::heuristic});
  }
  return labels;
}

std::vector<AccountLabel> classify_accounts(const LinkedCorpus& corpus,
                                            const std::optional<std::string>& manual_labels_file,
                                            bool heuristics_enabled) {
  std::map<std::string, AccountType> manual;
  if (manual_labels_file) manual = parse_label_file(util::read_file(*manual_labels_file));
  return classify_accounts(corpus, manual, heuristics_enabled);
}

std::string labels_csv(const std::vector<AccountLabel>& labels) {
  std::string out = "actor_id,type,source\n";
  for (const auto& l : labels) {
    out += util::csv_field(l.actor_id) + "," + std::string(token(l.type)) + "," +
           std::string(token(l.source)) + "\n";
  }
  return out;
}

BotShare bot_share(const LinkedCorpus& corpus, const std::vector<AccountLabel>& labels,
                   const std::optional<std::set<std::string>>& scope) {
  std::unordered_set<std::string> bots;
  for (const auto& l : labels) {
    if (l.type == AccountType::bot && (!scope || scope->contains(l.actor_id))) bots.insert(l.actor_id);
  }
  BotShare share;
  std::unordered_set<std::size_t> tweeted;
  std::unordered_set<std::size_t> bot_papers;
  for (const auto& m : corpus.mentions()) {
    if (!m.linked() || m.record.platform != PlatformKind::tweet) continue;
    ++share.total_tweets;
    tweeted.insert(*m.publication);
    if (bots.contains(m.record.actor_id)) {
      ++share.bot_tweets;
      bot_papers.insert(*m.publication);
    }
  }
  share.tweeted_papers = tweeted.size();
  share.bot_papers = bot_papers.size();
  if (share.total_tweets > 0) {
    share.tweet_share = 100.0 * static_cast<double>(share.bot_tweets) / static_cast<double>(share.total_tweets);
    share.paper_share =
        100.0 * static_cast<double>(share.bot_papers) / static_cast<double>(share.tweeted_papers);
  }
  return share;
}

std::string BotShare::to_text() const {
  return "bot_tweets=" + std::to_string(bot_tweets) + "\ntotal_tweets=" + std::to_string(total_tweets) +
         "\ntweet_share=" + util::format_fixed(tweet_share, 1) + "\nbot_papers=" +
         std::to_string(bot_papers) + "\ntweeted_papers=" + std::to_string(tweeted_papers) +
         "\npaper_share=" + util::format_fixed(paper_share, 1) + "\n";
}

// ---------------------------------------------------------------------------
// Heatmap

std::vector<std::chrono::year_month> MonthRange::months() const {
  if (last < first) {
    throw Error(ErrorKind::EmptyRange,
                "range " + format_year_month(first) + ".." + format_year_month(last) + " is empty");
  }
  std::vector<std::chrono::year_month> out;
  for (auto ym = first; ym <= last; ym += std::chrono::months{1}) out.push_back(ym);
  return out;
}

std::optional<std::chrono::year_month> parse_year_month(std::string_view text) noexcept {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  int year = 0;
  unsigned month = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    if (i == 4) continue;
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    if (i < 4) {
      year = year * 10 + (text[i] - '0');
    } else {
      month = month * 10 + static_cast<unsigned>(text[i] - '0');
    }
  }
  const std::chrono::year_month ym{std::chrono::year{year}, std::chrono::month{month}};
  if (!ym.ok()) return std::nullopt;
  return ym;
}

std::string format_year_month(std::chrono::year_month ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()),
                static_cast<unsigned>(ym.month()));
  return buf;
}

namespace {

std::chrono::year_month month_of(Timestamp ts) {
  const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(ts)};
  return {ymd.year(), ymd.month()};
}

}  // namespace

MonthRange platform_month_span(const LinkedCorpus& corpus, PlatformKind platform) {
  std::optional<MonthRange> span;
  for (const auto& m : corpus.mentions()) {
    if (!m.linked() || m.record.platform != platform) continue;
    const auto ym = month_of(m.record.timestamp);
    if (!span) {
      span = MonthRange{ym, ym};
    } else {
      span->first = std::min(span->first, ym);
      span->last = std::max(span->last, ym);
    }
  }
  if (!span) {
    throw Error(ErrorKind::EmptyRange, "no linked " + std::string(token(platform)) + " mentions");
  }
  return *span;
}

PhraseHeatmap noun_phrase_heatmap(const LinkedCorpus& corpus, PlatformKind platform,
                                  std::size_t top_n, const MonthRange& range,
                                  const TermExtractionConfig& extraction, HeatmapCell cell) {
  PhraseHeatmap heat;
  heat.months = range.months();
  const auto column = [&](std::chrono::year_month ym) {
    return static_cast<std::size_t>((ym.year() - range.first.year()).count() * 12 +
                                    (static_cast<int>(static_cast<unsigned>(ym.month())) -
                                     static_cast<int>(static_cast<unsigned>(range.first.month()))));
  };

  // (paper, month) -> mentions on the platform within the range.
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> hits;
  for (const auto& m : corpus.mentions()) {
    if (!m.linked() || m.record.platform != platform) continue;
    const auto ym = month_of(m.record.timestamp);
    if (ym < range.first || range.last < ym) continue;
    ++hits[{*m.publication, column(ym)}];
  }

  std::map<std::size_t, std::vector<std::string>> phrases_of;
  for (const auto& [key, count] : hits) {
    if (!phrases_of.contains(key.first)) {
      phrases_of.emplace(key.first, title_phrases(corpus.publications()[key.first].title, extraction));
    }
  }

  std::map<std::string, std::size_t> papers_per_phrase;
  for (const auto& [paper, phrases] : phrases_of) {
    for (const auto& p : phrases) ++papers_per_phrase[p];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(papers_per_phrase.begin(),
                                                          papers_per_phrase.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_n) ranked.resize(top_n);

  std::unordered_map<std::string, std::size_t> row_of;
  for (const auto& [phrase, papers] : ranked) {
    row_of.emplace(phrase, heat.phrases.size());
    heat.phrases.push_back(phrase);
    heat.ranking_papers.push_back(papers);
  }
  heat.cells.assign(heat.phrases.size(), std::vector<std::uint64_t>(heat.months.size(), 0));
  for (const auto& [key, count] : hits) {
    for (const auto& p : phrases_of.at(key.first)) {
      const auto it = row_of.find(p);
      if (it == row_of.end()) continue;
      heat.cells[it->second][key.second] += cell == HeatmapCell::papers ? 1 : count;
    }
  }
  heat.row_totals.reserve(heat.cells.size());
  for (const auto& row : heat.cells) {
    std::uint64_t total = 0;
    for (const auto c : row) total += c;
    heat.row_totals.push_back(total);
  }
  return heat;
}

std::string PhraseHeatmap::to_csv() const {
  std::string out = "phrase";
  for (const auto ym : months) out += "," + format_year_month(ym);
  out += ",total\n";
  for (std::size_t r = 0; r < phrases.size(); ++r) {
    out += util::csv_field(phrases[r]);
    for (const auto c : cells[r]) out += "," + std::to_string(c);
    out += "," + std::to_string(row_totals[r]) + "\n";
  }
  return out;
}

std::string PhraseHeatmap::to_table() const {
  std::vector<std::string> header{"Phrase"};
  std::vector<bool> numeric{false};
  for (const auto ym : months) {
    header.push_back(format_year_month(ym));
    numeric.push_back(true);
  }
  header.push_back("Total");
  numeric.push_back(true);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < phrases.size(); ++r) {
    std::vector<std::string> row{phrases[r]};
    for (const auto c : cells[r]) row.push_back(std::to_string(c));
    row.push_back(std::to_string(row_totals[r]));
    rows.push_back(std::move(row));
  }
  return text_table(header, numeric, rows);
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr std::array<std::string_view, 12> kClusterPalette = {
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
    "#f032e6", "#bfef45", "#469990", "#9a6324", "#800000", "#000075",
};
constexpr std::string_view kNeutral = "#bdbdbd";
// Sequential ramp endpoints (light yellow to dark red).
constexpr std::array<double, 3> kRampLow = {255, 237, 160};
constexpr std::array<double, 3> kRampHigh = {189, 0, 38};

std::string ramp_color(double t) {
  char buf[8];
  const auto channel = [t](std::size_t c) {
    return static_cast<int>(std::lround(kRampLow[c] + (kRampHigh[c] - kRampLow[c]) * t));
  };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(0), channel(1), channel(2));
  return buf;
}

std::string xml_text(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default:
        if (static_cast<unsigned char>(c) >= 0x20) out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const TermMap& map, const MapColoring& coloring) {
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  if (!map.rows.empty()) {
    min_x = max_x = map.rows.front().x;
    min_y = max_y = map.rows.front().y;
  }
  std::size_t max_df = 1;
  for (const auto& r : map.rows) {
    min_x = std::min(min_x, r.x);
    max_x = std::max(max_x, r.x);
    min_y = std::min(min_y, r.y);
    max_y = std::max(max_y, r.y);
    max_df = std::max(max_df, r.doc_frequency);
  }
  const double extent = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double margin = 0.1 * extent;
  const double unit = 0.01 * extent;

  std::vector<std::string> colors(map.rows.size(), std::string(kNeutral));
  if (const auto* partition = std::get_if<Partition>(&coloring)) {
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
      const std::size_t c = partition->assignment.empty() ? map.rows[i].cluster
                            : i < partition->assignment.size() ? partition->assignment[i]
                                                               : map.rows[i].cluster;
      colors[i] = kClusterPalette[c % kClusterPalette.size()];
    }
  } else {
    const auto& scores = std::get<std::vector<OverlayScore>>(coloring);
    std::unordered_map<std::string, double> value_of;
    double max_log = 0.0;
    for (const auto& s : scores) {
      value_of[s.term] = s.value;
      max_log = std::max(max_log, std::log1p(std::max(0.0, s.value)));
    }
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
      const auto it = value_of.find(map.rows[i].term);
      if (it == value_of.end() || !(it->second > 0.0) || max_log <= 0.0) continue;
      colors[i] = ramp_color(std::log1p(it->second) / max_log);
    }
  }

  const auto num = [](double v) { return util::format_fixed(v, 9); };
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(min_x - margin) + " " +
         num(min_y - margin) + " " + num(max_x - min_x + 2 * margin) + " " +
         num(max_y - min_y + 2 * margin) + "\">\n";
  out += "<rect x=\"" + num(min_x - margin) + "\" y=\"" + num(min_y - margin) + "\" width=\"" +
         num(max_x - min_x + 2 * margin) + "\" height=\"" + num(max_y - min_y + 2 * margin) +
         "\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < map.rows.size(); ++i) {
    const auto& r = map.rows[i];
    const double scale = 1.0 + std::log(static_cast<double>(std::max<std::size_t>(r.doc_frequency, 1)));
    out += "<g class=\"term\"><circle cx=\"" + num(r.x) + "\" cy=\"" + num(r.y) + "\" r=\"" +
           num(unit * scale) + "\" fill=\"" + colors[i] + "\" fill-opacity=\"0.85\"/>";
    out += "<text x=\"" + num(r.x) + "\" y=\"" + num(r.y - unit * scale * 1.3) + "\" font-size=\"" +
           num(1.5 * unit * scale) + "\" text-anchor=\"middle\" fill=\"#333333\">" + xml_text(r.term) +
           "</text></g>\n";
  }
  out += "</svg>\n";
  return out;
}

void render_svg(const TermMap& map, const MapColoring& coloring, const std::string& path) {
  util::write_file(path, render_svg(map, coloring));
}

}  // namespace altmap
