#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "sieu/error.hpp"
#include "sieu/ontology.hpp"
#include "support.hpp"

using namespace sieu;

namespace {

const char* kPrefixes =
    "@prefix : <http://example.org/u#> .\n"
    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
    "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n";

std::string iri(const std::string& local) { return "http://example.org/u#" + local; }

ConceptGraph parse(const std::string& body) { return parse_turtle(std::string(kPrefixes) + body); }

const ConceptGraph& bundled() {
  static const ConceptGraph g = load_turtle(test::data_dir() / "ontology" / "university.ttl");
  return g;
}

std::set<std::string> keys(const DomainKeywordSet& s) {
  std::set<std::string> out;
  for (const auto& [k, e] : s.entries()) out.insert(k);
  return out;
}

void expect_edges_consistent(const ConceptGraph& g) {
  for (const auto& [id, c] : g.concepts()) {
    EXPECT_FALSE(c.labels.empty()) << id;
    for (const auto& p : c.parents) {
      const auto* pc = g.find(p);
      ASSERT_NE(pc, nullptr) << p;
      EXPECT_TRUE(std::binary_search(pc->children.begin(), pc->children.end(), id)) << id << " " << p;
    }
    for (const auto& ch : c.children) {
      const auto* cc = g.find(ch);
      ASSERT_NE(cc, nullptr) << ch;
      EXPECT_TRUE(std::binary_search(cc->parents.begin(), cc->parents.end(), id)) << id << " " << ch;
    }
    for (const auto& e : c.equivalents) EXPECT_NE(g.find(e), nullptr) << e;
  }
}

}  // namespace

TEST(ParseTurtle, FacultyFixture) {
  auto g = parse(":Faculty rdfs:subClassOf :Employee ; rdfs:label \"faculty\", \"teaching staff\" .\n");
  EXPECT_EQ(g.size(), 2u);
  const auto* f = g.find(iri("Faculty"));
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->parents, (std::vector<std::string>{iri("Employee")}));
  EXPECT_EQ(f->labels, (std::vector<std::string>{"faculty", "teaching staff"}));
  EXPECT_EQ(g.find(iri("Employee"))->children, (std::vector<std::string>{iri("Faculty")}));
  expect_edges_consistent(g);
}

TEST(ParseTurtle, PrefixesOnly) {
  auto g = parse("");
  EXPECT_EQ(g.size(), 0u);
  EXPECT_EQ(g.prefixes().size(), 3u);
}

TEST(ParseTurtle, MinimalCycle) {
  EXPECT_THROW(parse(":A rdfs:subClassOf :B . :B rdfs:subClassOf :A .\n"), ValidationError);
}

TEST(ParseTurtle, CycleThroughEquivalenceIsCollapsed) {
  EXPECT_NO_THROW(parse(":A rdfs:subClassOf :B . :B rdfs:subClassOf :A . :A owl:equivalentClass :B .\n"));
}

TEST(ParseTurtle, UndeclaredPrefix) {
  try {
    parse(":A rdfs:subClassOf nope:B .\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseTurtle, SyntaxErrorPosition) {
  try {
    parse(":A rdfs:label \"x\" .\n:B rdfs:label \"unterminated .\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(ParseTurtle, SparqlPrefixLanguageTagsAndIndividuals) {
  auto g = parse_turtle(
      "PREFIX ex: <http://e.org/>\n"
      "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n"
      "ex:Uni a <http://www.w3.org/2002/07/owl#Class> ; rdfs:label \"University\"@en .\n"
      "ex:Anna a ex:Uni ; rdfs:label \"Anna University\"@en ; ex:unknown \"ignored\" .\n");
  const auto* anna = g.find("http://e.org/Anna");
  ASSERT_NE(anna, nullptr);
  EXPECT_EQ(anna->kind, ConceptKind::Individual);
  EXPECT_EQ(anna->parents, (std::vector<std::string>{"http://e.org/Uni"}));
  EXPECT_EQ(anna->labels, (std::vector<std::string>{"anna university"}));
  EXPECT_FALSE(g.warnings().empty());
  EXPECT_EQ(g.individual_labels(), (std::vector<std::vector<std::string>>{{"anna", "university"}}));
}

TEST(ParseTurtle, LabelFromLocalName) {
  EXPECT_EQ(label_from_local_name("TeachingStaff"), "teaching staff");
  auto g = parse(":AdministrativeStaff a owl:Class .\n");
  EXPECT_EQ(g.find(iri("AdministrativeStaff"))->labels, (std::vector<std::string>{"administrative staff"}));
}

TEST(ParseTurtle, BundledOntology) {
  const auto& g = bundled();
  EXPECT_GE(g.size(), 60u);
  expect_edges_consistent(g);
  EXPECT_NO_THROW(g.validate());
}

TEST(Merge, UnionsLabelsAndEdges) {
  auto a = parse(":Faculty rdfs:subClassOf :Employee ; rdfs:label \"faculty\" .\n");
  auto b = parse(":Faculty rdfs:label \"teaching staff\" . :Lecturer rdfs:subClassOf :Faculty .\n");
  a.merge(b);
  const auto* f = a.find(iri("Faculty"));
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->labels, (std::vector<std::string>{"faculty", "teaching staff"}));
  EXPECT_EQ(f->children, (std::vector<std::string>{iri("Lecturer")}));
  expect_edges_consistent(a);
}

TEST(Merge, DetectsCycleAcrossFiles) {
  auto a = parse(":A rdfs:subClassOf :B .\n");
  auto b = parse(":B rdfs:subClassOf :A .\n");
  EXPECT_THROW(a.merge(b), ValidationError);
}

TEST(MatchConcepts, PhraseExactLabel) {
  auto g = parse(":Faculty rdfs:subClassOf :Employee ; rdfs:label \"faculty\", \"teaching staff\" .\n");
  std::vector<std::string> terms{"teaching", "staff"};
  std::vector<std::vector<std::string>> phrases{{"teaching", "staff"}};
  auto m = match_concepts(terms, phrases, g);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (ConceptMatch{"teaching staff", iri("Faculty"), MatchKind::ExactLabel}));
}

TEST(MatchConcepts, NoMatch) {
  std::vector<std::string> terms{"banana", "smoothie"};
  EXPECT_TRUE(match_concepts(terms, {}, bundled()).empty());
}

TEST(MatchConcepts, LabelToken) {
  auto g = parse(":Faculty rdfs:subClassOf :Employee ; rdfs:label \"faculty\", \"teaching staff\" .\n");
  std::vector<std::string> terms{"staff"};
  auto m = match_concepts(terms, {}, g);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (ConceptMatch{"staff", iri("Faculty"), MatchKind::LabelToken}));
}

TEST(MatchConcepts, VariantsUsedForSingleTerms) {
  std::vector<std::string> terms{"faculties"};
  auto m = match_concepts(terms, {}, bundled(), [](const std::string& w) {
    return w == "faculties" ? std::vector<std::string>{"faculty"} : std::vector<std::string>{};
  });
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].concept_iri, "http://example.org/university#Faculty");
  EXPECT_EQ(m[0].kind, MatchKind::ExactLabel);
}

TEST(Keywords, TraceQueryOverBundledOntology) {
  const auto& a = test::bundled_engine().expand("list the teaching staff in anna university");
  for (const char* k : {"faculty", "staff", "employee", "people", "teaching", "anna", "university"}) {
    EXPECT_TRUE(a.keywords.covers(k)) << k;
  }
  for (const char* k : {"faculty", "employee", "people", "teaching staff", "anna university"}) {
    EXPECT_TRUE(a.keywords.contains(k)) << k;
  }
}

TEST(Keywords, EmptyMatches) { EXPECT_TRUE(extract_domain_keywords({}, bundled()).empty()); }

TEST(Keywords, DepthZeroOnChain) {
  auto g = parse(":A rdfs:subClassOf :B . :B rdfs:subClassOf :C .\n"
                 ":A rdfs:label \"alpha\" . :B rdfs:label \"beta\", \"bravo\" . :C rdfs:label \"gamma\" .\n");
  std::vector<ConceptMatch> m{{"beta", iri("B"), MatchKind::ExactLabel}};
  EXPECT_EQ(keys(extract_domain_keywords(m, g, {0, true})), (std::set<std::string>{"beta", "bravo"}));
  EXPECT_EQ(keys(extract_domain_keywords(m, g, {1, true})),
            (std::set<std::string>{"alpha", "beta", "bravo", "gamma"}));
}

TEST(Keywords, RelationWeights) {
  EXPECT_DOUBLE_EQ(relation_weight(KeywordRelation::Self), 1.0);
  EXPECT_DOUBLE_EQ(relation_weight(KeywordRelation::Equivalent), 0.9);
  EXPECT_DOUBLE_EQ(relation_weight(KeywordRelation::Parent), 0.6);
  EXPECT_DOUBLE_EQ(relation_weight(KeywordRelation::Child), 0.6);
  EXPECT_DOUBLE_EQ(relation_weight(KeywordRelation::Sibling), 0.5);

  std::vector<ConceptMatch> m{{"faculty", "http://example.org/university#Faculty", MatchKind::ExactLabel}};
  auto s = extract_domain_keywords(m, bundled());
  EXPECT_EQ(s.entries().at("faculty").relation, KeywordRelation::Self);
  EXPECT_EQ(s.entries().at("people").relation, KeywordRelation::Equivalent);
  EXPECT_EQ(s.entries().at("employee").relation, KeywordRelation::Parent);
  EXPECT_EQ(s.entries().at("lecturer").relation, KeywordRelation::Child);
  EXPECT_EQ(s.entries().at("administrative staff").relation, KeywordRelation::Sibling);
  EXPECT_DOUBLE_EQ(s.entries().at("administrative staff").weight, 0.5);
}

TEST(Keywords, SiblingsToggle) {
  std::vector<ConceptMatch> m{{"faculty", "http://example.org/university#Faculty", MatchKind::ExactLabel}};
  auto s = extract_domain_keywords(m, bundled(), {1, false});
  EXPECT_FALSE(s.contains("administrative staff"));
  for (const auto& [k, e] : s.entries()) EXPECT_NE(e.relation, KeywordRelation::Sibling) << k;
}

TEST(KeywordSet, HigherWeightWins) {
  DomainKeywordSet s;
  s.add("x", {"a", "a", KeywordRelation::Sibling, 0.5});
  s.add("x", {"b", "b", KeywordRelation::Self, 1.0});
  s.add("x", {"c", "c", KeywordRelation::Parent, 0.6});
  EXPECT_EQ(s.entries().at("x").concept_iri, "b");
  EXPECT_DOUBLE_EQ(s.total_weight(), 1.0);
  EXPECT_TRUE(s.covers("x"));
}

namespace {

// Labels of every concept within `depth` subclass hops of `start`, of
// equivalents, and of co-children of its parents. Computed by plain BFS.
std::set<std::string> reachable_labels(const ConceptGraph& g, const std::string& start, int depth) {
  std::set<std::string> seen{start};
  std::deque<std::pair<std::string, int>> queue{{start, 0}};
  auto add_equivalents = [&](const std::string& id, int d) {
    for (const auto& e : g.find(id)->equivalents) {
      if (seen.insert(e).second) queue.emplace_back(e, d);
    }
  };
  while (!queue.empty()) {
    auto [id, d] = queue.front();
    queue.pop_front();
    add_equivalents(id, d);
    if (d == depth) continue;
    const auto* c = g.find(id);
    for (const auto* edges : {&c->parents, &c->children}) {
      for (const auto& n : *edges) {
        if (seen.insert(n).second) queue.emplace_back(n, d + 1);
      }
    }
  }
  if (depth >= 1) {
    for (const auto& p : g.find(start)->parents) {
      for (const auto& sib : g.find(p)->children) seen.insert(sib);
    }
  }
  std::set<std::string> labels;
  for (const auto& id : seen) {
    for (const auto& l : g.find(id)->labels) labels.insert(l);
  }
  return labels;
}

ConceptGraph random_graph(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::string doc = kPrefixes;
  static const std::vector<std::string> words = {"staff", "faculty", "hall", "dept", "fee",
                                                 "board", "course", "lab", "a \\\"quoted\\\" word"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = ":C" + std::to_string(i);
    doc += id + " a owl:Class ; rdfs:label \"" + words[pick(rng)] + " " + std::to_string(i) + "\"";
    if (coin(rng) == 0) doc += ", \"" + words[pick(rng)] + "\"";
    doc += " .\n";
    for (std::size_t j = 0; j < i; ++j) {
      if (coin(rng) == 0 && coin(rng) < 2) doc += id + " rdfs:subClassOf :C" + std::to_string(j) + " .\n";
    }
    if (i > 0 && coin(rng) == 0 && coin(rng) == 0) {
      doc += id + " owl:equivalentClass :C" + std::to_string(i - 1) + " .\n";
    }
    if (coin(rng) == 0 && i > 0) doc += ":I" + std::to_string(i) + " a :C" + std::to_string(i - 1) + " .\n";
  }
  return parse_turtle(doc);
}

}  // namespace

TEST(OntologyProperties, RoundTrip) {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 60; ++iter) {
    auto g = random_graph(rng, 1 + iter % 15);
    auto text = serialize_turtle(g);
    auto back = parse_turtle(text);
    EXPECT_EQ(back, g) << text;
    EXPECT_EQ(serialize_turtle(back), text);
    expect_edges_consistent(back);
  }
  EXPECT_EQ(parse_turtle(serialize_turtle(bundled())), bundled());
}

TEST(OntologyProperties, DepthMonotone) {
  const auto& g = bundled();
  for (const auto& [id, c] : g.concepts()) {
    std::vector<ConceptMatch> m{{c.labels.front(), id, MatchKind::ExactLabel}};
    for (int d = 0; d < 3; ++d) {
      auto lo = keys(extract_domain_keywords(m, g, {d, true}));
      auto hi = keys(extract_domain_keywords(m, g, {d + 1, true}));
      EXPECT_TRUE(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end())) << id << " depth " << d;
    }
  }
}

TEST(OntologyProperties, KeywordsReachableByBfs) {
  std::mt19937 rng(5);
  std::vector<ConceptGraph> graphs{bundled()};
  for (int i = 0; i < 20; ++i) graphs.push_back(random_graph(rng, 12));
  for (const auto& g : graphs) {
    for (const auto& [id, c] : g.concepts()) {
      std::vector<ConceptMatch> m{{c.labels.front(), id, MatchKind::ExactLabel}};
      for (int d = 0; d <= 2; ++d) {
        auto oracle = reachable_labels(g, id, d);
        for (const auto& k : keys(extract_domain_keywords(m, g, {d, true}))) {
          EXPECT_TRUE(oracle.count(k)) << id << " depth " << d << " keyword " << k;
        }
        for (const auto& l : c.labels) EXPECT_TRUE(extract_domain_keywords(m, g, {d, true}).contains(l));
      }
    }
  }
}

TEST(OntologyProperties, WeightsInRange) {
  const auto& g = bundled();
  for (const auto& [id, c] : g.concepts()) {
    std::vector<ConceptMatch> m{{c.labels.front(), id, MatchKind::ExactLabel}};
    auto set = extract_domain_keywords(m, g, {2, true});
    for (const auto& [k, e] : set.entries()) {
      EXPECT_GT(e.weight, 0.0);
      EXPECT_LE(e.weight, 1.0);
      EXPECT_DOUBLE_EQ(e.weight, relation_weight(e.relation));
    }
  }
}
