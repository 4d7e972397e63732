#include "sieu/engine.hpp"

#include <chrono>
#include <fstream>
#include <future>

#include "sieu/error.hpp"
#include "sieu/html.hpp"

namespace sieu {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

// Noun phrases as lemma runs without determiners or stop words.
std::vector<std::vector<std::string>> content_phrases(const AnalyzedQuery& a,
                                                      const Stoplist& stoplist) {
  std::vector<std::vector<std::string>> out;
  for (const auto& np : a.noun_phrases) {
    std::vector<std::string> words;
    for (std::size_t i = np.begin; i < np.end; ++i) {
      const auto& t = a.tokens[i];
      if (t.tag == PosTag::DT || stoplist.contains(t.lemma)) continue;
      words.push_back(t.lemma);
    }
    if (!words.empty()) out.push_back(std::move(words));
  }
  return out;
}

AnalyzerConfig make_analyzer_config(const Config& config, const ConceptGraph& graph) {
  AnalyzerConfig a;
  if (!config.paths.tag_lexicon.empty()) a.lexicon = TagLexicon::load(config.paths.tag_lexicon);
  if (!config.paths.stoplist.empty()) a.stoplist = load_stoplist(config.paths.stoplist);
  a.entity_labels = graph.individual_labels();
  return a;
}

}  // namespace

ConceptGraph load_ontologies(const Config& config) {
  ConceptGraph graph;
  bool first = true;
  for (const auto& path : config.paths.ontology) {
    auto g = load_turtle(path);
    if (first) {
      graph = std::move(g);
      first = false;
    } else {
      graph.merge(g);
    }
  }
  return graph;
}

std::shared_ptr<const SearchBackend> make_backend(const Config& config) {
  if (config.backend == BackendKind::Live) return std::make_shared<HttpBackend>(config.live);
  std::ifstream in(config.paths.corpus);
  if (!in) throw LoadError("cannot read corpus " + config.paths.corpus.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  std::shared_ptr<const CorpusIndex> index;
  if (j.is_object() && j.contains("documents")) {
    index = std::make_shared<CorpusIndex>(CorpusIndex::from_json(j));
  } else {
    index = std::make_shared<CorpusIndex>(CorpusIndex::build(load_corpus_manifest(config.paths.corpus)));
  }
  return std::make_shared<CorpusBackend>(std::move(index));
}

Engine::Engine(Config config, AnalyzerConfig analyzer, std::shared_ptr<const Lexicon> lexicon,
               std::shared_ptr<const ConceptGraph> ontology,
               std::shared_ptr<const SearchBackend> backend)
    : config_(std::move(config)),
      analyzer_(std::move(analyzer)),
      lexicon_(std::move(lexicon)),
      ontology_(std::move(ontology)),
      backend_(std::move(backend)) {
  if (!ontology_) ontology_ = std::make_shared<ConceptGraph>();
  if (!backend_) throw ConfigError("backend", "no search backend configured");
}

Engine Engine::load(const Config& config) {
  validate(config);
  auto graph = std::make_shared<ConceptGraph>(load_ontologies(config));
  std::shared_ptr<const Lexicon> lexicon;
  if (!config.paths.wordnet.empty()) {
    lexicon = std::make_shared<Lexicon>(Lexicon::load_wordnet(config.paths.wordnet));
  }
  auto analyzer = make_analyzer_config(config, *graph);
  return Engine(config, std::move(analyzer), std::move(lexicon), std::move(graph),
                make_backend(config));
}

SearchResponse Engine::run_expand(std::string_view query, double& elapsed_ms) const {
  if (blank(query)) throw RequestError(400, "query must not be empty");
  SearchResponse r;
  r.query = std::string(query);
  auto stage = [&](const char* name, auto&& fn) {
    auto start = Clock::now();
    fn();
    double ms = ms_since(start);
    r.timings.emplace_back(name, ms);
    elapsed_ms += ms;
  };

  stage("analyze", [&] { r.analysis = analyzer_.analyze(query); });

  stage("ontology", [&] {
    auto phrases = content_phrases(r.analysis, analyzer_.stoplist());
    TermVariants variants;
    if (lexicon_) {
      variants = [lex = lexicon_.get()](const std::string& w) {
        return lex->base_forms(w, WordPos::Noun);
      };
    }
    r.matches = match_concepts(r.analysis.content_terms, phrases, *ontology_, variants);
    r.keywords = extract_domain_keywords(
        r.matches, *ontology_, {config_.pipeline.depth, config_.pipeline.siblings});
    if (r.analysis.is_location_query) {
      for (const auto& loc : r.analysis.location_terms) {
        r.keywords.add(loc, {"", "", KeywordRelation::Self, 1.0});
      }
    }
  });

  stage("expand", [&] {
    ExpansionParams params;
    params.max_expansions = config_.pipeline.e_max;
    r.expansions =
        build_expansion_map(r.analysis, r.matches, lexicon_.get(), r.keywords, params);
  });

  stage("refine", [&] {
    r.refined_queries = generate_refined_queries(r.expansions, config_.pipeline.q_max);
  });
  return r;
}

SearchResponse Engine::expand(std::string_view query) const {
  auto start = Clock::now();
  double elapsed = 0;
  auto r = run_expand(query, elapsed);
  r.total_ms = ms_since(start);
  return r;
}

RankingContext Engine::ranking_context(const SearchResponse& r) const {
  RankingContext ctx;
  ctx.keywords = r.keywords;
  for (const auto& a : r.analysis.anchor_terms) {
    for (auto& w : split_words(a)) ctx.anchors.insert(std::move(w));
  }
  ctx.phrases = content_phrases(r.analysis, analyzer_.stoplist());
  ctx.weights = config_.pipeline.weights;
  return ctx;
}

SearchResponse Engine::search(std::string_view query, std::optional<std::size_t> k) const {
  auto start = Clock::now();
  double elapsed = 0;
  auto r = run_expand(query, elapsed);
  const auto& p = config_.pipeline;

  std::map<std::size_t, std::vector<SearchResult>> per_query;
  auto search_start = Clock::now();
  {
    std::vector<const RefinedQuery*> todo;
    for (const auto& q : r.refined_queries) {
      if (!q.terms.empty()) todo.push_back(&q);
    }
    auto run_one = [this, kq = p.k_per_query](const RefinedQuery* q) {
      return backend_->search(*q, kq);
    };
    auto collect = [&](const RefinedQuery* q, auto&& get) {
      try {
        per_query[q->id] = get();
      } catch (const std::exception& e) {
        r.failed_queries.push_back({q->id, e.what()});
      }
    };
    if (p.concurrent && todo.size() > 1) {
      std::vector<std::future<std::vector<SearchResult>>> futures;
      for (auto* q : todo) futures.push_back(std::async(std::launch::async, run_one, q));
      for (std::size_t i = 0; i < todo.size(); ++i) {
        collect(todo[i], [&] { return futures[i].get(); });
      }
    } else {
      for (auto* q : todo) collect(q, [&] { return run_one(q); });
    }
    if (!todo.empty() && r.failed_queries.size() == todo.size()) {
      throw RequestError(502, "every backend call failed; first error: " +
                                  r.failed_queries.front().message);
    }
  }
  double search_ms = ms_since(search_start);
  r.timings.emplace_back("search", search_ms);

  auto rank_start = Clock::now();
  auto ctx = ranking_context(r);
  for (auto& [qid, list] : per_query) list = filter_results(list, ctx, p.theta, p.k_min);
  MetaKeywords meta;
  if (p.deep_scoring) {
    meta = [this](const std::string& url) {
      auto page = backend_->fetch_page(url);
      return page ? extract_page_meta(*page).meta_keywords : std::vector<std::string>{};
    };
  }
  r.results = fuse_and_rank(per_query, ctx, k.value_or(p.k_out), p.rrf_k, meta);
  r.timings.emplace_back("rank", ms_since(rank_start));
  r.total_ms = ms_since(start);
  return r;
}

}  // namespace sieu
