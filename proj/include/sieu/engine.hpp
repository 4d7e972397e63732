#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sieu/config.hpp"
#include "sieu/lexicon.hpp"
#include "sieu/ontology.hpp"
#include "sieu/ranking.hpp"
#include "sieu/refinement.hpp"
#include "sieu/search.hpp"
#include "sieu/text_analysis.hpp"

namespace sieu {

struct FailedQuery {
  std::size_t query_id = 0;
  std::string message;
};

/// Every intermediate artifact of one pipeline run.
struct SearchResponse {
  std::string query;
  AnalyzedQuery analysis;
  std::vector<ConceptMatch> matches;
  DomainKeywordSet keywords;
  ExpansionMap expansions;
  std::vector<RefinedQuery> refined_queries;
  std::vector<RankedResult> results;
  std::vector<FailedQuery> failed_queries;
  std::vector<std::pair<std::string, double>> timings;  // stage -> ms, in order
  double total_ms = 0.0;
};

/// Loaded once; every method is const and safe to call concurrently.
class Engine {
 public:
  Engine(Config config, AnalyzerConfig analyzer, std::shared_ptr<const Lexicon> lexicon,
         std::shared_ptr<const ConceptGraph> ontology,
         std::shared_ptr<const SearchBackend> backend);

  /// Reads every file named by the config and builds the backend.
  static Engine load(const Config& config);

  /// Analysis through refined queries; throws RequestError(400) for an
  /// empty query.
  SearchResponse expand(std::string_view query) const;
  /// Full pipeline. `k` overrides the configured k_out. Throws
  /// RequestError(502) when every backend call fails.
  SearchResponse search(std::string_view query, std::optional<std::size_t> k = {}) const;

  const Config& config() const { return config_; }
  const Analyzer& analyzer() const { return analyzer_; }
  const Lexicon* lexicon() const { return lexicon_.get(); }
  const ConceptGraph& ontology() const { return *ontology_; }
  const SearchBackend& backend() const { return *backend_; }

  /// Keyword context used for filtering and scoring.
  RankingContext ranking_context(const SearchResponse& response) const;

 private:
  SearchResponse run_expand(std::string_view query, double& elapsed_ms) const;

  Config config_;
  Analyzer analyzer_;
  std::shared_ptr<const Lexicon> lexicon_;
  std::shared_ptr<const ConceptGraph> ontology_;
  std::shared_ptr<const SearchBackend> backend_;
};

/// Builds the backend named by the config. A corpus path ending in
/// ".json" is read as a manifest unless it holds a saved index.
std::shared_ptr<const SearchBackend> make_backend(const Config& config);

/// Loads and merges every ontology file of the config.
ConceptGraph load_ontologies(const Config& config);

// JSON views, matching the schemas under docs/schemas.
nlohmann::json to_json(const AnalyzedQuery& analysis);
nlohmann::json to_json(const ExpansionMap& map);
nlohmann::json to_json(const DomainKeywordSet& keywords);
nlohmann::json to_json(const RefinedQuery& query);
nlohmann::json to_json(const RankedResult& result);
nlohmann::json to_json(const SearchResponse& response);
/// Analysis, expansions and refined queries only.
nlohmann::json expand_to_json(const SearchResponse& response);

/// Human-readable trace of a response.
std::string format_text(const SearchResponse& response);

}  // namespace sieu
