#include <iomanip>
#include <sstream>

#include "sieu/engine.hpp"

namespace sieu {

using nlohmann::json;

json to_json(const AnalyzedQuery& a) {
  json tokens = json::array();
  for (const auto& t : a.tokens) {
    tokens.push_back({{"text", t.text}, {"lemma", t.lemma}, {"tag", std::string(to_string(t.tag))}});
  }
  json phrases = json::array();
  for (const auto& np : a.noun_phrases) {
    phrases.push_back({{"text", np.text()}, {"begin", np.begin}, {"end", np.end}});
  }
  return {{"tokens", tokens},
          {"noun_phrases", phrases},
          {"content_terms", a.content_terms},
          {"anchor_terms", a.anchor_terms},
          {"is_location_query", a.is_location_query},
          {"location_terms", a.location_terms}};
}

json to_json(const ExpansionMap& map) {
  json terms = json::object();
  for (const auto& s : map.slots()) {
    json exps = json::array();
    for (const auto& e : s.expansions) {
      exps.push_back({{"lemma", e.lemma},
                      {"source", std::string(to_string(e.source))},
                      {"weight", e.weight}});
    }
    terms[s.term] = exps;
  }
  return terms;
}

json to_json(const DomainKeywordSet& keywords) {
  json out = json::array();
  for (const auto& [kw, e] : keywords.entries()) {
    out.push_back({{"keyword", kw},
                   {"concept", e.concept_iri},
                   {"origin", e.origin_iri},
                   {"relation", std::string(to_string(e.relation))},
                   {"weight", e.weight}});
  }
  return out;
}

json to_json(const RefinedQuery& q) {
  return {{"id", q.id}, {"terms", q.terms}, {"text", q.text()}, {"prior", q.prior}};
}

json to_json(const RankedResult& r) {
  const auto& b = r.breakdown;
  return {{"rank", r.final_rank},
          {"url", r.url},
          {"title", r.title},
          {"snippet", r.snippet},
          {"score", b.total},
          {"breakdown",
           {{"rrf", b.rrf},
            {"title", b.cov_title},
            {"snippet", b.cov_snippet},
            {"url", b.cov_url},
            {"phrase", b.np_bonus}}},
          {"query_ids", r.query_ids}};
}

namespace {

json common_json(const SearchResponse& r) {
  json matches = json::array();
  for (const auto& m : r.matches) {
    matches.push_back({{"term", m.query_term},
                       {"concept", m.concept_iri},
                       {"kind", std::string(to_string(m.kind))}});
  }
  json refined = json::array();
  for (const auto& q : r.refined_queries) refined.push_back(to_json(q));
  json timings = json::object();
  for (const auto& [stage, ms] : r.timings) timings[stage] = ms;
  timings["total"] = r.total_ms;
  return {{"query", r.query},
          {"analysis", to_json(r.analysis)},
          {"matches", matches},
          {"expansions", {{"terms", to_json(r.expansions)}, {"keywords", to_json(r.keywords)}}},
          {"refined_queries", refined},
          {"timings", timings}};
}

}  // namespace

json to_json(const SearchResponse& r) {
  auto j = common_json(r);
  json results = json::array();
  for (const auto& x : r.results) results.push_back(to_json(x));
  json failed = json::array();
  for (const auto& f : r.failed_queries) {
    failed.push_back({{"query_id", f.query_id}, {"message", f.message}});
  }
  j["results"] = results;
  j["failed_queries"] = failed;
  return j;
}

json expand_to_json(const SearchResponse& r) {
  auto j = common_json(r);
  json order = json::array();
  for (const auto& s : r.expansions.slots()) order.push_back(s.term);
  json queries = json::array();
  for (const auto& q : r.refined_queries) {
    queries.push_back({{"id", q.id}, {"terms", q.terms}, {"prior", q.prior}});
  }
  j["terms"] = to_json(r.expansions);
  j["term_order"] = order;
  j["queries"] = queries;
  return j;
}

std::string format_text(const SearchResponse& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "query: " << r.query << "\n\ntagged:";
  for (const auto& t : r.analysis.tokens) out << ' ' << t.text << '/' << to_string(t.tag);
  out << "\nchunks:";
  for (const auto& np : r.analysis.noun_phrases) out << " [" << np.text() << ']';
  out << "\ncontent terms: " << join(r.analysis.content_terms, ", ");
  out << "\nanchors: " << join(r.analysis.anchor_terms, ", ");
  if (r.analysis.is_location_query) {
    out << "\nlocation: " << join(r.analysis.location_terms, ", ");
  }
  out << "\n\ndomain keywords:";
  for (const auto& [kw, e] : r.keywords.entries()) {
    out << "\n  " << kw << " (" << to_string(e.relation) << ", " << e.weight << ')';
  }
  out << "\n\nexpansions:";
  for (const auto& s : r.expansions.slots()) {
    out << "\n  " << s.term << (s.anchor ? " [anchor]" : "") << ':';
    for (const auto& e : s.expansions) {
      out << ' ' << e.lemma << " (" << to_string(e.source) << ' ' << e.weight << ')';
    }
  }
  out << "\n\nrefined queries:";
  for (const auto& q : r.refined_queries) {
    out << "\n  " << q.id << ". " << q.text() << "  prior=" << q.prior;
  }
  if (!r.results.empty() || !r.failed_queries.empty()) {
    out << "\n\nresults:";
    for (const auto& x : r.results) {
      out << "\n  " << x.final_rank << ". " << x.title << "\n     " << x.url
          << "  score=" << x.breakdown.total;
    }
  }
  for (const auto& f : r.failed_queries) {
    out << "\n  query " << f.query_id << " failed: " << f.message;
  }
  out << "\n\ntimings (ms):";
  for (const auto& [stage, ms] : r.timings) out << ' ' << stage << '=' << ms;
  out << " total=" << r.total_ms << '\n';
  return out.str();
}

}  // namespace sieu
