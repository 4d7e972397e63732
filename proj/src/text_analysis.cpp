#include "sieu/text_analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sieu/error.hpp"

namespace sieu {

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 16> kTagNames{{
    {PosTag::NN, "NN"},   {PosTag::NNS, "NNS"}, {PosTag::NNP, "NNP"},
    {PosTag::VB, "VB"},   {PosTag::VBG, "VBG"}, {PosTag::VBD, "VBD"},
    {PosTag::VBZ, "VBZ"}, {PosTag::DT, "DT"},   {PosTag::IN, "IN"},
    {PosTag::JJ, "JJ"},   {PosTag::CC, "CC"},   {PosTag::WRB, "WRB"},
    {PosTag::WP, "WP"},   {PosTag::TO, "TO"},   {PosTag::CD, "CD"},
    {PosTag::OTHER, "OTHER"},
}};

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_ascii_alpha(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(b, e - b + 1));
}

// Single letters separated by periods: "M.B.A", "U.S".
bool is_abbreviation(std::string_view s) {
  if (s.size() < 3) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i % 2 == 0) {
      if (!is_ascii_alpha(s[i])) return false;
    } else if (s[i] != '.') {
      return false;
    }
  }
  return s.size() % 2 == 1;
}

void emit_run(std::string_view run, std::vector<std::string>& out) {
  // Strip outer periods, then keep abbreviations whole.
  auto b = run.find_first_not_of('.');
  if (b == std::string_view::npos) return;
  auto e = run.find_last_not_of('.');
  std::string_view core = run.substr(b, e - b + 1);
  if (core.find('.') == std::string_view::npos || is_abbreviation(core)) {
    out.emplace_back(core);
    return;
  }
  std::size_t start = 0;
  while (start <= core.size()) {
    auto dot = core.find('.', start);
    if (dot == std::string_view::npos) dot = core.size();
    if (dot > start) out.emplace_back(core.substr(start, dot - start));
    start = dot + 1;
  }
}

std::vector<std::string> split_surface(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(raw[i]);
    if (!is_word_byte(c) && c != '.') {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string run;
    while (j < n) {
      auto d = static_cast<unsigned char>(raw[j]);
      if (is_word_byte(d) || d == '.') {
        run.push_back(raw[j]);
        ++j;
      } else if (d == '\'' && j + 1 < n && !run.empty() &&
                 is_word_byte(static_cast<unsigned char>(raw[j + 1]))) {
        // Possessive "'s" is dropped; other inner apostrophes are kept.
        bool possessive = (raw[j + 1] == 's' || raw[j + 1] == 'S') &&
                          (j + 2 >= n || !is_word_byte(static_cast<unsigned char>(raw[j + 2])));
        if (possessive) {
          j += 2;
          break;
        }
        run.push_back('\'');
        ++j;
      } else {
        break;
      }
    }
    emit_run(run, out);
    i = j;
  }
  return out;
}

PosTag suffix_tag(std::string_view w) {
  if (std::all_of(w.begin(), w.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
    return PosTag::CD;
  }
  if (w.find('.') != std::string_view::npos) return PosTag::NN;
  if (w.size() > 4 && w.ends_with("ing")) return PosTag::VBG;
  if (w.size() > 3 && w.ends_with('s') && !w.ends_with("ss")) return PosTag::NNS;
  return PosTag::NN;
}

}  // namespace

std::string_view to_string(PosTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "OTHER";
}

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

std::string NounPhrase::text() const { return join(lemmas, " "); }

bool AnalyzedQuery::is_anchor(std::string_view lemma) const {
  return std::find(anchor_terms.begin(), anchor_terms.end(), lemma) !=
         anchor_terms.end();
}

PosTag AnalyzedQuery::tag_of(std::string_view lemma) const {
  for (const auto& t : tokens) {
    if (t.lemma == lemma) return t.tag;
  }
  return PosTag::OTHER;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(std::move(w));
  return out;
}

std::vector<Token> tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  for (auto& text : split_surface(raw)) {
    Token t;
    t.lemma = to_lower(text);
    t.text = std::move(text);
    t.index = tokens.size();
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<std::string> tokenize_lemmas(std::string_view raw) {
  auto parts = split_surface(raw);
  for (auto& p : parts) p = to_lower(p);
  return parts;
}

TagLexicon TagLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open tag lexicon: " + path.string());
  return parse(in, path.string());
}

TagLexicon TagLexicon::parse(std::istream& in, const std::string& source) {
  TagLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(source, line_no, 0, "expected word<TAB>TAGS");
    }
    auto word = to_lower(trim(std::string_view(line).substr(0, tab)));
    std::vector<PosTag> tags;
    std::stringstream ss(line.substr(tab + 1));
    std::string name;
    while (std::getline(ss, name, ',')) {
      name = trim(name);
      if (name.empty()) continue;
      auto tag = parse_pos_tag(name);
      if (!tag) throw ParseError(source, line_no, 0, "unknown tag '" + name + "'");
      tags.push_back(*tag);
    }
    if (word.empty() || tags.empty()) {
      throw ParseError(source, line_no, 0, "empty word or tag list");
    }
    lex.add(std::move(word), std::move(tags));
  }
  return lex;
}

void TagLexicon::add(std::string word, std::vector<PosTag> tags) {
  entries_[std::move(word)] = std::move(tags);
}

const std::vector<PosTag>* TagLexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

Stoplist load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open stoplist: " + path.string());
  return parse_stoplist(in);
}

Stoplist parse_stoplist(std::istream& in) {
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto term = to_lower(trim(line));
    if (!term.empty()) out.insert(std::move(term));
  }
  return out;
}

std::vector<Token> pos_tag(std::vector<Token> tokens, const TagLexicon& lexicon) {
  for (auto& t : tokens) {
    if (const auto* tags = lexicon.find(t.lemma)) {
      t.tag = tags->front();
    } else {
      t.tag = suffix_tag(t.lemma);
    }
  }
  return tokens;
}

std::vector<NounPhrase> chunk_noun_phrases(std::span<const Token> tagged) {
  // (DT)? (JJ)* (NN|NNS|NNP)+, maximal, left to right.
  std::vector<NounPhrase> out;
  std::size_t i = 0;
  while (i < tagged.size()) {
    std::size_t j = i;
    if (tagged[j].tag == PosTag::DT) ++j;
    while (j < tagged.size() && tagged[j].tag == PosTag::JJ) ++j;
    std::size_t k = j;
    while (k < tagged.size() && is_noun(tagged[k].tag)) ++k;
    if (k == j) {
      ++i;
      continue;
    }
    NounPhrase np;
    np.begin = i;
    np.end = k;
    for (std::size_t t = i; t < k; ++t) np.lemmas.push_back(tagged[t].lemma);
    out.push_back(std::move(np));
    i = k;
  }
  return out;
}

std::vector<Token> remove_stop_words(std::span<const Token> tokens,
                                     const Stoplist& stoplist) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    if (!stoplist.contains(t.lemma)) out.push_back(t);
  }
  return out;
}

LocationTriggers LocationTriggers::defaults() {
  LocationTriggers t;
  for (const char* w : {"near", "nearby", "located", "location", "distance",
                        "map", "maps", "route"}) {
    t.phrases.push_back({w});
  }
  t.phrases.push_back({"how", "far"});
  return t;
}

LocationClass classify_location(std::span<const Token> tagged,
                                std::span<const NounPhrase> phrases,
                                const LocationTriggers& triggers,
                                const Stoplist& stoplist) {
  std::vector<bool> is_trigger(tagged.size(), false);
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    for (const auto& phrase : triggers.phrases) {
      if (phrase.empty() || i + phrase.size() > tagged.size()) continue;
      bool hit = true;
      for (std::size_t k = 0; k < phrase.size(); ++k) {
        if (tagged[i + k].lemma != phrase[k]) {
          hit = false;
          break;
        }
      }
      if (hit) {
        for (std::size_t k = 0; k < phrase.size(); ++k) is_trigger[i + k] = true;
        if (!first) first = i;
      }
    }
  }
  if (!first) return {};

  auto content_of = [&](const NounPhrase& np) {
    std::vector<std::string> terms;
    for (const auto& l : np.lemmas) {
      if (!stoplist.contains(l)) terms.push_back(l);
    }
    return terms;
  };

  // A chunk right after a trigger or a preposition, past the first trigger.
  const NounPhrase* chosen = nullptr;
  for (const auto& np : phrases) {
    if (np.begin == 0 || np.begin <= *first) continue;
    const auto& prev = tagged[np.begin - 1];
    if ((is_trigger[np.begin - 1] || prev.tag == PosTag::IN ||
         prev.tag == PosTag::TO) &&
        !content_of(np).empty()) {
      chosen = &np;
      break;
    }
  }
  if (!chosen) {
    for (const auto& np : phrases) {
      if (np.begin > *first && !content_of(np).empty()) {
        chosen = &np;
        break;
      }
    }
  }
  if (!chosen) {
    for (auto it = phrases.rbegin(); it != phrases.rend(); ++it) {
      if (it->begin < *first && !content_of(*it).empty()) {
        chosen = &*it;
        break;
      }
    }
  }
  if (!chosen) return {};
  return {true, content_of(*chosen)};
}

Analyzer::Analyzer(AnalyzerConfig config) : config_(std::move(config)) {
  for (const auto& label : config_.entity_labels) {
    if (label.empty()) continue;
    longest_entity_ = std::max(longest_entity_, label.size());
    entities_.insert(label);
  }
}

AnalyzedQuery Analyzer::analyze(std::string_view raw) const {
  AnalyzedQuery q;
  q.raw = std::string(raw);
  q.tokens = pos_tag(tokenize(raw), config_.lexicon);
  q.noun_phrases = chunk_noun_phrases(q.tokens);

  for (const auto& t : remove_stop_words(q.tokens, config_.stoplist)) {
    if (std::find(q.content_terms.begin(), q.content_terms.end(), t.lemma) ==
        q.content_terms.end()) {
      q.content_terms.push_back(t.lemma);
    }
  }

  auto loc = classify_location(q.tokens, q.noun_phrases, config_.triggers,
                               config_.stoplist);
  q.is_location_query = loc.is_location_query;
  q.location_terms = std::move(loc.location_terms);

  std::set<std::string, std::less<>> anchors(q.location_terms.begin(),
                                             q.location_terms.end());
  for (const auto& np : q.noun_phrases) {
    std::size_t nouns = 0, proper = 0;
    for (std::size_t i = np.begin; i < np.end; ++i) {
      if (is_noun(q.tokens[i].tag)) ++nouns;
      if (q.tokens[i].tag == PosTag::NNP) ++proper;
    }
    if (proper > 0 && proper * 2 >= nouns) {
      anchors.insert(np.lemmas.begin(), np.lemmas.end());
    }
  }
  // Longest entity label match at each position.
  for (std::size_t i = 0; i < q.tokens.size();) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(longest_entity_, q.tokens.size() - i);
         len > 0; --len) {
      std::vector<std::string> span;
      for (std::size_t k = i; k < i + len; ++k) span.push_back(q.tokens[k].lemma);
      if (entities_.contains(span)) {
        matched = len;
        anchors.insert(span.begin(), span.end());
        break;
      }
    }
    i += matched ? matched : 1;
  }
  for (const auto& term : q.content_terms) {
    if (anchors.contains(term)) q.anchor_terms.push_back(term);
  }
  return q;
}

}  // namespace sieu
