#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sieu {

enum class WordPos { Noun, Verb, Adj, Adv };

std::string_view pos_file_name(WordPos pos);  // "noun", "verb", "adj", "adv"
char pos_code(WordPos pos);                    // 'n', 'v', 'a', 'r'
std::optional<WordPos> parse_pos_code(char c);

struct SynsetId {
  WordPos pos = WordPos::Noun;
  std::uint32_t offset = 0;

  auto operator<=>(const SynsetId&) const = default;
};

std::string to_string(SynsetId id);  // e.g. "v02560585"

struct Synset {
  SynsetId id;
  std::vector<std::string> lemmas;  // lowercase, '_' for spaces
};

struct SynonymEntry {
  std::string lemma;
  SynsetId source;

  bool operator==(const SynonymEntry&) const = default;
};

/// A loaded WordNet 3.x flat-file database (or a subset of one).
class Lexicon {
 public:
  struct LoadOptions {
    bool adjectives_and_adverbs = false;
  };

  /// Reads index.<pos>, data.<pos> and <pos>.exc for nouns and verbs
  /// (and adj/adv when requested).
  static Lexicon load_wordnet(const std::filesystem::path& directory,
                              LoadOptions options);
  static Lexicon load_wordnet(const std::filesystem::path& directory) {
    return load_wordnet(directory, LoadOptions{});
  }

  /// Parsers for single files; `source` names the file in errors.
  void parse_index(std::istream& in, WordPos pos, const std::string& source);
  void parse_data(std::istream& in, WordPos pos, const std::string& source);
  void parse_exceptions(std::istream& in, WordPos pos, const std::string& source);
  /// Throws ValidationError when an index entry names a missing synset.
  void check_references() const;

  bool contains(std::string_view lemma, WordPos pos) const;
  const std::vector<SynsetId>* lookup(std::string_view lemma, WordPos pos) const;
  const Synset* synset(SynsetId id) const;

  /// Exception list first, then suffix detachment; only indexed forms.
  std::vector<std::string> base_forms(std::string_view word, WordPos pos) const;
  /// Co-members of every synset containing a base form of `lemma`.
  std::vector<SynonymEntry> synonyms(std::string_view lemma, WordPos pos) const;

  std::size_t index_size(WordPos pos) const;
  std::size_t synset_count() const { return synsets_.size(); }
  std::vector<std::string> indexed_lemmas(WordPos pos) const;

 private:
  static std::size_t slot(WordPos pos) { return static_cast<std::size_t>(pos); }

  std::map<std::string, std::vector<SynsetId>, std::less<>> index_[4];
  std::map<std::string, std::vector<std::string>, std::less<>> exceptions_[4];
  std::map<SynsetId, Synset> synsets_;
};

/// Lowercases and replaces spaces with underscores.
std::string wordnet_key(std::string_view text);

}  // namespace sieu
