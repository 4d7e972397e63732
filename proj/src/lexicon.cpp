#include "sieu/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <span>
#include <sstream>

#include "sieu/error.hpp"
#include "sieu/text_analysis.hpp"

namespace sieu {

namespace {

constexpr WordPos kAllPos[] = {WordPos::Noun, WordPos::Verb, WordPos::Adj,
                               WordPos::Adv};

struct Rule {
  std::string_view suffix;
  std::string_view ending;
};

constexpr Rule kNounRules[] = {{"s", ""},     {"ses", "s"},  {"xes", "x"},
                               {"zes", "z"},  {"ches", "ch"}, {"shes", "sh"},
                               {"men", "man"}, {"ies", "y"}};
constexpr Rule kVerbRules[] = {{"s", ""},   {"ies", "y"}, {"es", "e"},
                               {"es", ""},  {"ed", "e"},  {"ed", ""},
                               {"ing", "e"}, {"ing", ""}};
constexpr Rule kAdjRules[] = {{"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};

// Whitespace-separated fields with their 1-based column.
class FieldReader {
 public:
  FieldReader(std::string_view line, const std::string& source, std::size_t line_no)
      : line_(line), source_(source), line_no_(line_no) {}

  std::string_view next(const char* what) {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    if (pos_ >= line_.size()) fail(std::string("missing ") + what);
    column_ = pos_ + 1;
    auto end = line_.find(' ', pos_);
    if (end == std::string_view::npos) end = line_.size();
    auto field = line_.substr(pos_, end - pos_);
    pos_ = end;
    return field;
  }

  std::uint32_t number(const char* what, int base = 10) {
    auto f = next(what);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v, base);
    if (ec != std::errc{} || ptr != f.data() + f.size()) {
      fail(std::string("bad ") + what + " '" + std::string(f) + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_, line_no_, column_, message);
  }

 private:
  std::string_view line_;
  const std::string& source_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
  std::size_t column_ = 1;
};

// License header lines start with a space.
bool skip_line(const std::string& line) {
  return line.empty() || line[0] == ' ' || line == "\r";
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::ifstream open_required(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("missing WordNet file: " + p.string());
  return in;
}

}  // namespace

std::string_view pos_file_name(WordPos pos) {
  switch (pos) {
    case WordPos::Noun: return "noun";
    case WordPos::Verb: return "verb";
    case WordPos::Adj: return "adj";
    case WordPos::Adv: return "adv";
  }
  return "noun";
}

char pos_code(WordPos pos) {
  switch (pos) {
    case WordPos::Noun: return 'n';
    case WordPos::Verb: return 'v';
    case WordPos::Adj: return 'a';
    case WordPos::Adv: return 'r';
  }
  return 'n';
}

std::optional<WordPos> parse_pos_code(char c) {
  switch (c) {
    case 'n': return WordPos::Noun;
    case 'v': return WordPos::Verb;
    case 'a':
    case 's': return WordPos::Adj;
    case 'r': return WordPos::Adv;
    default: return std::nullopt;
  }
}

std::string to_string(SynsetId id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%08u", pos_code(id.pos), id.offset);
  return buf;
}

std::string wordnet_key(std::string_view text) {
  auto out = to_lower(text);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

Lexicon Lexicon::load_wordnet(const std::filesystem::path& directory,
                              LoadOptions options) {
  if (!std::filesystem::is_directory(directory)) {
    throw LoadError("WordNet directory not found: " + directory.string());
  }
  Lexicon lex;
  for (WordPos pos : kAllPos) {
    bool optional_pos = pos == WordPos::Adj || pos == WordPos::Adv;
    if (optional_pos && !options.adjectives_and_adverbs) continue;
    auto name = std::string(pos_file_name(pos));
    auto index_path = directory / ("index." + name);
    auto data_path = directory / ("data." + name);
    auto exc_path = directory / (name + ".exc");
    {
      auto in = open_required(index_path);
      lex.parse_index(in, pos, index_path.string());
    }
    {
      auto in = open_required(data_path);
      lex.parse_data(in, pos, data_path.string());
    }
    {
      auto in = open_required(exc_path);
      lex.parse_exceptions(in, pos, exc_path.string());
    }
  }
  lex.check_references();
  return lex;
}

void Lexicon::parse_index(std::istream& in, WordPos pos, const std::string& source) {
  auto& index = index_[slot(pos)];
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (skip_line(raw)) continue;
    auto line = strip_cr(raw);
    FieldReader f(line, source, line_no);
    std::string lemma = to_lower(f.next("lemma"));
    auto pos_field = f.next("pos");
    if (pos_field.size() != 1 || parse_pos_code(pos_field[0]) != pos) {
      f.fail("pos field does not match file");
    }
    auto synset_cnt = f.number("synset_cnt");
    auto p_cnt = f.number("p_cnt");
    for (std::uint32_t i = 0; i < p_cnt; ++i) f.next("ptr_symbol");
    f.number("sense_cnt");
    f.number("tagsense_cnt");
    std::vector<SynsetId> ids;
    ids.reserve(synset_cnt);
    for (std::uint32_t i = 0; i < synset_cnt; ++i) {
      ids.push_back({pos, f.number("synset_offset")});
    }
    index[std::move(lemma)] = std::move(ids);
  }
}

void Lexicon::parse_data(std::istream& in, WordPos pos, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (skip_line(raw)) continue;
    auto full = strip_cr(raw);
    auto bar = full.find(" | ");
    std::string_view line(full);
    if (bar != std::string::npos) line = line.substr(0, bar);
    FieldReader f(line, source, line_no);
    Synset s;
    s.id = {pos, f.number("synset_offset")};
    f.number("lex_filenum");
    auto ss_type = f.next("ss_type");
    if (ss_type.size() != 1 || parse_pos_code(ss_type[0]) != pos) {
      f.fail("ss_type does not match file");
    }
    auto w_cnt = f.number("w_cnt", 16);
    if (w_cnt == 0) f.fail("synset without words");
    for (std::uint32_t i = 0; i < w_cnt; ++i) {
      std::string word(f.next("word"));
      // Adjective syntactic markers: "word(a)", "word(ip)".
      if (auto paren = word.find('('); paren != std::string::npos && word.back() == ')') {
        word.erase(paren);
      }
      f.number("lex_id", 16);
      s.lemmas.push_back(to_lower(word));
    }
    auto p_cnt = f.number("p_cnt");
    for (std::uint32_t i = 0; i < p_cnt; ++i) {
      f.next("pointer_symbol");
      f.number("synset_offset");
      f.next("pos");
      f.number("source/target", 16);
    }
    if (pos == WordPos::Verb) {
      auto f_cnt = f.number("f_cnt");
      for (std::uint32_t i = 0; i < f_cnt; ++i) {
        if (f.next("frame marker") != "+") f.fail("expected '+' before frame");
        f.number("f_num");
        f.number("w_num", 16);
      }
    }
    synsets_[s.id] = std::move(s);
  }
}

void Lexicon::parse_exceptions(std::istream& in, WordPos pos, const std::string& source) {
  auto& exc = exceptions_[slot(pos)];
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (skip_line(raw)) continue;
    auto line = strip_cr(raw);
    auto words = split_words(line);
    if (words.size() < 2) {
      throw ParseError(source, line_no, 1, "expected inflected form and base form");
    }
    auto& bases = exc[to_lower(words[0])];
    for (std::size_t i = 1; i < words.size(); ++i) bases.push_back(to_lower(words[i]));
  }
}

void Lexicon::check_references() const {
  for (WordPos pos : kAllPos) {
    for (const auto& [lemma, ids] : index_[slot(pos)]) {
      for (const auto& id : ids) {
        if (!synsets_.contains(id)) {
          throw ValidationError("index entry '" + lemma + "' refers to missing synset " +
                                to_string(id));
        }
      }
    }
  }
}

bool Lexicon::contains(std::string_view lemma, WordPos pos) const {
  return lookup(lemma, pos) != nullptr;
}

const std::vector<SynsetId>* Lexicon::lookup(std::string_view lemma, WordPos pos) const {
  const auto& index = index_[slot(pos)];
  auto it = index.find(wordnet_key(lemma));
  return it == index.end() ? nullptr : &it->second;
}

const Synset* Lexicon::synset(SynsetId id) const {
  auto it = synsets_.find(id);
  return it == synsets_.end() ? nullptr : &it->second;
}

std::vector<std::string> Lexicon::base_forms(std::string_view word, WordPos pos) const {
  const std::string key = wordnet_key(word);
  std::vector<std::string> out;
  auto add = [&](const std::string& form) {
    if (contains(form, pos) && std::find(out.begin(), out.end(), form) == out.end()) {
      out.push_back(form);
    }
  };

  const auto& exc = exceptions_[slot(pos)];
  if (auto it = exc.find(key); it != exc.end()) {
    for (const auto& base : it->second) add(base);
  }
  add(key);

  std::span<const Rule> rules;
  switch (pos) {
    case WordPos::Noun: rules = kNounRules; break;
    case WordPos::Verb: rules = kVerbRules; break;
    case WordPos::Adj: rules = kAdjRules; break;
    case WordPos::Adv: break;
  }
  for (const auto& rule : rules) {
    if (key.size() > rule.suffix.size() && key.ends_with(rule.suffix)) {
      add(key.substr(0, key.size() - rule.suffix.size()) + std::string(rule.ending));
    }
  }
  return out;
}

std::vector<SynonymEntry> Lexicon::synonyms(std::string_view lemma, WordPos pos) const {
  auto bases = base_forms(lemma, pos);
  const std::string key = wordnet_key(lemma);
  std::set<SynsetId> ids;
  for (const auto& b : bases) {
    if (const auto* list = lookup(b, pos)) ids.insert(list->begin(), list->end());
  }
  std::vector<SynonymEntry> out;
  std::set<std::string, std::less<>> seen(bases.begin(), bases.end());
  seen.insert(key);
  for (const auto& id : ids) {
    const Synset* s = synset(id);
    if (!s) continue;
    std::vector<std::string> members = s->lemmas;
    std::sort(members.begin(), members.end());
    for (const auto& m : members) {
      if (seen.insert(m).second) out.push_back({m, id});
    }
  }
  return out;
}

std::size_t Lexicon::index_size(WordPos pos) const { return index_[slot(pos)].size(); }

std::vector<std::string> Lexicon::indexed_lemmas(WordPos pos) const {
  std::vector<std::string> out;
  for (const auto& [lemma, ids] : index_[slot(pos)]) out.push_back(lemma);
  return out;
}

}  // namespace sieu
