#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sieu/text_analysis.hpp"

namespace sieu {

enum class ConceptKind { Class, Individual };

struct Concept {
  std::string iri;
  ConceptKind kind = ConceptKind::Class;
  std::vector<std::string> labels;  // lowercased, primary first
  // Sorted by iri. For individuals, parents are their rdf:type classes.
  std::vector<std::string> parents;
  std::vector<std::string> children;
  std::vector<std::string> equivalents;

  bool operator==(const Concept&) const = default;
};

class ConceptGraph {
 public:
  const std::map<std::string, Concept>& concepts() const { return concepts_; }
  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  const Concept* find(std::string_view iri) const;
  std::size_t size() const { return concepts_.size(); }

  /// Union with another graph; duplicate IRIs merge labels and edges.
  /// Re-validates the subclass hierarchy.
  void merge(const ConceptGraph& other);

  /// Tokenized labels of all individuals.
  std::vector<std::vector<std::string>> individual_labels() const;

  /// Throws ValidationError naming the cycle when subClassOf is cyclic
  /// after collapsing owl:equivalentClass groups.
  void validate() const;

  bool operator==(const ConceptGraph& other) const {
    return concepts_ == other.concepts_;
  }

 private:
  friend class TurtleBuilder;

  std::map<std::string, Concept> concepts_;
  std::map<std::string, std::string> prefixes_;
  std::vector<std::string> warnings_;
};

ConceptGraph parse_turtle(std::string_view text, const std::string& source = "<turtle>");
ConceptGraph load_turtle(const std::filesystem::path& path);
std::string serialize_turtle(const ConceptGraph& graph);

/// "TeachingStaff" -> "teaching staff".
std::string label_from_local_name(std::string_view local);

enum class MatchKind { ExactLabel, LabelToken };
std::string_view to_string(MatchKind kind);

struct ConceptMatch {
  std::string query_term;  // may span several words
  std::string concept_iri;
  MatchKind kind = MatchKind::ExactLabel;

  bool operator==(const ConceptMatch&) const = default;
};

/// Optional morphological variants of a single word (e.g. WordNet base
/// forms); the word itself is always tried first.
using TermVariants = std::function<std::vector<std::string>(const std::string&)>;

/// Phrases are lemma runs (stop words already removed). Each query term is
/// matched at most once; multi-word phrase matches win over single terms,
/// full labels over label tokens.
std::vector<ConceptMatch> match_concepts(std::span<const std::string> terms,
                                         std::span<const std::vector<std::string>> phrases,
                                         const ConceptGraph& graph,
                                         const TermVariants& variants = {});

enum class KeywordRelation { Self, Equivalent, Parent, Child, Sibling };
std::string_view to_string(KeywordRelation relation);
double relation_weight(KeywordRelation relation);

struct DomainKeyword {
  std::string concept_iri;  // concept carrying the label
  std::string origin_iri;   // matched concept the keyword was reached from
  KeywordRelation relation = KeywordRelation::Self;
  double weight = 1.0;

  bool operator==(const DomainKeyword&) const = default;
};

class DomainKeywordSet {
 public:
  /// Higher weight wins on collision; equal weight keeps the first.
  void add(const std::string& keyword, DomainKeyword entry);

  const std::map<std::string, DomainKeyword>& entries() const { return entries_; }
  bool contains(std::string_view keyword) const;
  /// True when `term` is a keyword or one word of a multi-word keyword.
  bool covers(std::string_view term) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double total_weight() const;

  bool operator==(const DomainKeywordSet&) const = default;

 private:
  std::map<std::string, DomainKeyword> entries_;
};

struct KeywordOptions {
  int depth = 1;
  bool siblings = true;
};

DomainKeywordSet extract_domain_keywords(std::span<const ConceptMatch> matches,
                                         const ConceptGraph& graph,
                                         const KeywordOptions& options = {});

}  // namespace sieu
