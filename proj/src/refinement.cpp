#include "sieu/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <set>

namespace sieu {

namespace {

// Priors are products of a handful of weights; compare them on a fixed grid
// so that a*b*c and a*c*b tie.
long long prior_key(double prior) { return std::llround(prior * 1e12); }

std::string underscores_to_spaces(std::string s) {
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

std::optional<WordPos> wordnet_pos(PosTag tag) {
  if (is_noun(tag)) return WordPos::Noun;
  if (is_verb(tag)) return WordPos::Verb;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ExpansionSource source) {
  switch (source) {
    case ExpansionSource::Self: return "self";
    case ExpansionSource::Ontology: return "ontology";
    case ExpansionSource::WordNet: return "wordnet";
  }
  return "self";
}

const ExpansionSlot* ExpansionMap::find(std::string_view term) const {
  for (const auto& s : slots_) {
    if (s.term == term) return &s;
  }
  return nullptr;
}

std::string RefinedQuery::text() const { return join(terms, " "); }

ExpansionMap build_expansion_map(const AnalyzedQuery& analyzed,
                                 std::span<const ConceptMatch> matches,
                                 const Lexicon* lexicon,
                                 const DomainKeywordSet& keywords,
                                 const ExpansionParams& params) {
  struct Pending {
    std::string term;
    bool anchor = false;
    bool phrase = false;
    const ConceptMatch* match = nullptr;
  };
  std::vector<Pending> pending;
  const auto& terms = analyzed.content_terms;
  for (std::size_t i = 0; i < terms.size();) {
    const ConceptMatch* merged = nullptr;
    std::size_t len = 1;
    for (const auto& m : matches) {
      auto words = split_words(m.query_term);
      if (words.size() < 2 || i + words.size() > terms.size()) continue;
      if (!std::equal(words.begin(), words.end(), terms.begin() + static_cast<std::ptrdiff_t>(i))) {
        continue;
      }
      bool any_anchor = std::any_of(words.begin(), words.end(),
                                    [&](const auto& w) { return analyzed.is_anchor(w); });
      if (any_anchor) continue;
      merged = &m;
      len = words.size();
      break;
    }
    if (merged) {
      pending.push_back({merged->query_term, false, true, merged});
    } else {
      Pending p{terms[i], analyzed.is_anchor(terms[i]), false, nullptr};
      for (const auto& m : matches) {
        if (m.query_term == terms[i]) p.match = &m;
      }
      pending.push_back(std::move(p));
    }
    i += len;
  }

  std::set<std::string> slot_terms;
  for (const auto& p : pending) slot_terms.insert(p.term);

  ExpansionMap out;
  for (const auto& p : pending) {
    ExpansionSlot slot;
    slot.term = p.term;
    slot.anchor = p.anchor;
    slot.expansions.push_back({p.term, ExpansionSource::Self, 1.0});
    if (p.anchor) {
      out.push_back(std::move(slot));
      continue;
    }

    std::map<std::string, Expansion> candidates;
    auto offer = [&](Expansion e) {
      if (slot_terms.contains(e.lemma)) return;
      auto [it, inserted] = candidates.try_emplace(e.lemma, e);
      if (!inserted && e.weight > it->second.weight) it->second = std::move(e);
    };
    if (p.match) {
      for (const auto& [kw, entry] : keywords.entries()) {
        if (entry.origin_iri != p.match->concept_iri) continue;
        offer({kw, ExpansionSource::Ontology, entry.weight * params.ontology_scale});
      }
    }
    if (lexicon) {
      auto pos = p.phrase ? std::optional<WordPos>(WordPos::Noun)
                          : wordnet_pos(analyzed.tag_of(p.term));
      if (pos) {
        for (const auto& syn : lexicon->synonyms(p.term, *pos)) {
          offer({underscores_to_spaces(syn.lemma), ExpansionSource::WordNet,
                 params.wordnet_weight});
        }
      }
    }

    std::vector<Expansion> ranked;
    for (auto& [lemma, e] : candidates) ranked.push_back(std::move(e));
    std::sort(ranked.begin(), ranked.end(), [](const Expansion& a, const Expansion& b) {
      if (prior_key(a.weight) != prior_key(b.weight)) return a.weight > b.weight;
      return a.lemma < b.lemma;
    });
    for (auto& e : ranked) {
      if (slot.expansions.size() >= std::max<std::size_t>(params.max_expansions, 1)) break;
      slot.expansions.push_back(std::move(e));
    }
    out.push_back(std::move(slot));
  }
  return out;
}

std::vector<RefinedQuery> generate_refined_queries(const ExpansionMap& map,
                                                   std::size_t max_queries) {
  max_queries = std::max<std::size_t>(max_queries, 1);
  const auto& slots = map.slots();
  if (slots.empty()) return {RefinedQuery{1, {}, 1.0, {}}};

  struct Candidate {
    std::vector<std::size_t> choice;
    std::vector<std::string> terms;
    double prior = 1.0;
  };
  auto make = [&](std::vector<std::size_t> choice) {
    Candidate c;
    c.choice = std::move(choice);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto& e = slots[s].expansions[c.choice[s]];
      c.terms.push_back(e.lemma);
      c.prior *= e.weight;
    }
    return c;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    if (prior_key(a.prior) != prior_key(b.prior)) return a.prior > b.prior;
    return a.terms < b.terms;
  };
  auto heap_cmp = [&](const Candidate& a, const Candidate& b) { return better(b, a); };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(heap_cmp)> heap(heap_cmp);
  std::set<std::vector<std::size_t>> visited;
  auto multiset_of = [](std::vector<std::string> terms) {
    std::sort(terms.begin(), terms.end());
    return terms;
  };

  std::vector<std::size_t> start(slots.size(), 0);
  visited.insert(start);
  heap.push(make(start));

  // Priors never increase along successor edges, so every candidate whose
  // prior ties the cut-off is popped before the walk stops.
  constexpr std::size_t kMaxPops = 200000;
  std::vector<Candidate> popped;
  std::set<std::vector<std::string>> distinct;
  double cutoff = 0.0;
  while (!heap.empty() && popped.size() < kMaxPops) {
    if (distinct.size() >= max_queries && prior_key(heap.top().prior) < prior_key(cutoff)) break;
    Candidate c = heap.top();
    heap.pop();
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (c.choice[s] + 1 >= slots[s].expansions.size()) continue;
      auto next = c.choice;
      ++next[s];
      if (visited.insert(next).second) heap.push(make(std::move(next)));
    }
    if (distinct.insert(multiset_of(c.terms)).second && distinct.size() == max_queries) {
      cutoff = c.prior;
    }
    popped.push_back(std::move(c));
  }

  std::stable_sort(popped.begin(), popped.end(), [&](const Candidate& a, const Candidate& b) {
    bool a_self = std::all_of(a.choice.begin(), a.choice.end(), [](auto i) { return i == 0; });
    bool b_self = std::all_of(b.choice.begin(), b.choice.end(), [](auto i) { return i == 0; });
    if (a_self != b_self) return a_self;
    return better(a, b);
  });

  std::vector<RefinedQuery> out;
  std::set<std::vector<std::string>> emitted;
  for (const auto& c : popped) {
    if (out.size() >= max_queries) break;
    if (!emitted.insert(multiset_of(c.terms)).second) continue;
    RefinedQuery q;
    q.id = out.size() + 1;
    q.terms = c.terms;
    q.prior = c.prior;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      q.provenance.emplace(slots[s].term, slots[s].expansions[c.choice[s]]);
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace sieu
