#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sieu {

enum class PosTag {
  NN, NNS, NNP, VB, VBG, VBD, VBZ, DT, IN, JJ, CC, WRB, WP, TO, CD, OTHER
};

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

inline bool is_noun(PosTag t) {
  return t == PosTag::NN || t == PosTag::NNS || t == PosTag::NNP;
}
inline bool is_verb(PosTag t) {
  return t == PosTag::VB || t == PosTag::VBG || t == PosTag::VBD ||
         t == PosTag::VBZ;
}

struct Token {
  std::string text;   // surface form
  std::string lemma;  // lowercased surface form
  std::size_t index = 0;
  PosTag tag = PosTag::OTHER;

  bool operator==(const Token&) const = default;
};

/// Contiguous token span [begin, end); the head is the last token.
struct NounPhrase {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> lemmas;

  std::size_t head() const { return end - 1; }
  std::string text() const;

  bool operator==(const NounPhrase&) const = default;
};

struct AnalyzedQuery {
  std::string raw;
  std::vector<Token> tokens;
  std::vector<NounPhrase> noun_phrases;
  std::vector<std::string> content_terms;
  std::vector<std::string> anchor_terms;
  bool is_location_query = false;
  std::vector<std::string> location_terms;

  bool is_anchor(std::string_view lemma) const;
  /// Tag of the first token carrying `lemma`, OTHER when absent.
  PosTag tag_of(std::string_view lemma) const;

  bool operator==(const AnalyzedQuery&) const = default;
};

/// ASCII lowercase; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);
std::string join(std::span<const std::string> parts, std::string_view sep);
std::vector<std::string> split_words(std::string_view s);

std::vector<Token> tokenize(std::string_view raw);
/// Lowercased token texts, for callers that only need the terms.
std::vector<std::string> tokenize_lemmas(std::string_view raw);

/// word -> allowed tags, first tag preferred.
class TagLexicon {
 public:
  TagLexicon() = default;

  static TagLexicon load(const std::filesystem::path& path);
  static TagLexicon parse(std::istream& in, const std::string& source = "<tag lexicon>");

  void add(std::string word, std::vector<PosTag> tags);
  const std::vector<PosTag>* find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<PosTag>, std::less<>> entries_;
};

using Stoplist = std::set<std::string, std::less<>>;

Stoplist load_stoplist(const std::filesystem::path& path);
Stoplist parse_stoplist(std::istream& in);

std::vector<Token> pos_tag(std::vector<Token> tokens, const TagLexicon& lexicon);
std::vector<NounPhrase> chunk_noun_phrases(std::span<const Token> tagged);
std::vector<Token> remove_stop_words(std::span<const Token> tokens,
                                     const Stoplist& stoplist);

struct LocationTriggers {
  std::vector<std::vector<std::string>> phrases;

  static LocationTriggers defaults();
};

struct LocationClass {
  bool is_location_query = false;
  std::vector<std::string> location_terms;

  bool operator==(const LocationClass&) const = default;
};

LocationClass classify_location(std::span<const Token> tagged,
                                std::span<const NounPhrase> phrases,
                                const LocationTriggers& triggers,
                                const Stoplist& stoplist);

struct AnalyzerConfig {
  TagLexicon lexicon;
  Stoplist stoplist;
  LocationTriggers triggers = LocationTriggers::defaults();
  /// Tokenized labels of named entities (ontology individuals). Any token
  /// run matching one of them is an anchor.
  std::vector<std::vector<std::string>> entity_labels;
};

/// Immutable after construction.
class Analyzer {
 public:
  explicit Analyzer(AnalyzerConfig config);

  AnalyzedQuery analyze(std::string_view raw) const;

  const TagLexicon& lexicon() const { return config_.lexicon; }
  const Stoplist& stoplist() const { return config_.stoplist; }

 private:
  AnalyzerConfig config_;
  std::size_t longest_entity_ = 0;
  std::set<std::vector<std::string>> entities_;
};

}  // namespace sieu
