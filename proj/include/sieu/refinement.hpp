#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sieu/lexicon.hpp"
#include "sieu/ontology.hpp"
#include "sieu/text_analysis.hpp"

namespace sieu {

enum class ExpansionSource { Self, Ontology, WordNet };
std::string_view to_string(ExpansionSource source);

struct Expansion {
  std::string lemma;  // may contain spaces ("teaching staff")
  ExpansionSource source = ExpansionSource::Self;
  double weight = 1.0;

  bool operator==(const Expansion&) const = default;
};

/// One substitutable position of the query. A slot is a single content
/// term, or a run of content terms matched together to an ontology label.
struct ExpansionSlot {
  std::string term;
  bool anchor = false;
  std::vector<Expansion> expansions;  // self first, then weight desc, lemma asc

  bool operator==(const ExpansionSlot&) const = default;
};

class ExpansionMap {
 public:
  const std::vector<ExpansionSlot>& slots() const { return slots_; }
  const ExpansionSlot* find(std::string_view term) const;
  std::size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }

  void push_back(ExpansionSlot slot) { slots_.push_back(std::move(slot)); }

  bool operator==(const ExpansionMap&) const = default;

 private:
  std::vector<ExpansionSlot> slots_;  // query order
};

struct ExpansionParams {
  std::size_t max_expansions = 5;  // per slot, self included
  double ontology_scale = 0.9;
  double wordnet_weight = 0.8;
};

ExpansionMap build_expansion_map(const AnalyzedQuery& analyzed,
                                 std::span<const ConceptMatch> matches,
                                 const Lexicon* lexicon,
                                 const DomainKeywordSet& keywords,
                                 const ExpansionParams& params = {});

struct RefinedQuery {
  std::size_t id = 0;  // 1-based; 1 is the all-self query
  std::vector<std::string> terms;
  double prior = 1.0;
  std::map<std::string, Expansion> provenance;  // slot term -> chosen expansion

  std::string text() const;

  bool operator==(const RefinedQuery&) const = default;
};

/// Best-first walk over the per-slot Cartesian product: descending prior,
/// ties by lexicographic term list, identical term multisets dropped.
std::vector<RefinedQuery> generate_refined_queries(const ExpansionMap& map,
                                                   std::size_t max_queries = 16);

}  // namespace sieu
