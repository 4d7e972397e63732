#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sieu/ontology.hpp"
#include "sieu/search.hpp"

namespace sieu {

struct ScoreWeights {
  double rrf = 0.4;
  double title = 0.25;
  double snippet = 0.2;
  double url = 0.05;
  double phrase = 0.1;

  double sum() const { return rrf + title + snippet + url + phrase; }
  ScoreWeights scaled(double factor) const {
    return {rrf * factor, title * factor, snippet * factor, url * factor, phrase * factor};
  }
};

struct ScoreBreakdown {
  double rrf = 0.0;
  double cov_title = 0.0;
  double cov_snippet = 0.0;
  double cov_url = 0.0;
  double np_bonus = 0.0;
  double total = 0.0;
};

struct RankedResult {
  std::string url;  // normalized
  std::string title;
  std::string snippet;
  ScoreBreakdown breakdown;
  std::size_t final_rank = 0;
  std::vector<std::size_t> query_ids;  // refined queries that returned it
};

/// Everything the scorer needs besides the result itself.
struct RankingContext {
  DomainKeywordSet keywords;
  /// Anchor words; keywords made only of anchor words do not count
  /// towards the filter threshold.
  std::set<std::string, std::less<>> anchors;
  /// Query noun phrases as lemma runs, determiners and stop words removed.
  std::vector<std::vector<std::string>> phrases;
  ScoreWeights weights;
};

/// Extra snippet terms for a url, e.g. page meta keywords.
using MetaKeywords = std::function<std::vector<std::string>(const std::string& url)>;

/// True when every word of `phrase` occurs contiguously in `tokens`.
bool contains_phrase(std::span<const std::string> tokens, std::span<const std::string> phrase);

/// Keywords (by key) that occur in the token list.
std::vector<std::string> keywords_present(std::span<const std::string> tokens,
                                          const DomainKeywordSet& keywords);

/// Number of distinct non-anchor keywords in title + snippet.
std::size_t keyword_hits(const SearchResult& result, const RankingContext& ctx);

/// Keeps results with at least `theta` keyword hits; when fewer than
/// `k_min` pass, the best-ranked rejects are added back up to `k_min`.
/// Output is in backend-rank order.
std::vector<SearchResult> filter_results(std::span<const SearchResult> results,
                                         const RankingContext& ctx, std::size_t theta = 1,
                                         std::size_t k_min = 5);

/// Scores one result. `rrf` is the normalized fusion component and
/// `extra_snippet` is added to the snippet field before coverage.
ScoreBreakdown score_result(const SearchResult& result, const RankingContext& ctx,
                            double rrf = 0.0,
                            std::span<const std::string> extra_snippet = {});

/// Dedupes by normalized url, fuses ranks with 1 / (rrf_k + rank), scores
/// and sorts by total (ties by url). The result does not depend on the
/// order of the input lists.
std::vector<RankedResult> fuse_and_rank(
    const std::map<std::size_t, std::vector<SearchResult>>& per_query,
    const RankingContext& ctx, std::size_t k_out = 20, double rrf_k = 60.0,
    const MetaKeywords& meta = {});

}  // namespace sieu
