#include "sieu/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "sieu/text_analysis.hpp"
#include "sieu/url.hpp"

namespace sieu {

namespace {

bool is_anchor_keyword(const std::string& keyword, const RankingContext& ctx) {
  auto words = split_words(keyword);
  return !words.empty() && std::all_of(words.begin(), words.end(),
                                       [&](const auto& w) { return ctx.anchors.contains(w); });
}

double coverage(std::span<const std::string> tokens, const DomainKeywordSet& keywords,
                double total_weight) {
  if (total_weight <= 0) return 0.0;
  double hit = 0.0;
  for (const auto& kw : keywords_present(tokens, keywords)) {
    hit += keywords.entries().at(kw).weight;
  }
  return std::clamp(hit / total_weight, 0.0, 1.0);
}

}  // namespace

bool contains_phrase(std::span<const std::string> tokens, std::span<const std::string> phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return false;
  return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

std::vector<std::string> keywords_present(std::span<const std::string> tokens,
                                          const DomainKeywordSet& keywords) {
  std::vector<std::string> out;
  for (const auto& [kw, entry] : keywords.entries()) {
    auto words = tokenize_lemmas(kw);
    if (contains_phrase(tokens, words)) out.push_back(kw);
  }
  return out;
}

std::size_t keyword_hits(const SearchResult& result, const RankingContext& ctx) {
  auto title = tokenize_lemmas(result.title);
  auto snippet = tokenize_lemmas(result.snippet);
  std::set<std::string> hits;
  for (auto* field : {&title, &snippet}) {
    for (auto& kw : keywords_present(*field, ctx.keywords)) {
      if (!is_anchor_keyword(kw, ctx)) hits.insert(std::move(kw));
    }
  }
  return hits.size();
}

std::vector<SearchResult> filter_results(std::span<const SearchResult> results,
                                         const RankingContext& ctx, std::size_t theta,
                                         std::size_t k_min) {
  std::vector<SearchResult> sorted(results.begin(), results.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.backend_rank < b.backend_rank;
  });
  std::vector<bool> keep(sorted.size(), false);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (keyword_hits(sorted[i], ctx) >= theta) {
      keep[i] = true;
      ++kept;
    }
  }
  for (std::size_t i = 0; i < sorted.size() && kept < k_min; ++i) {
    if (!keep[i]) {
      keep[i] = true;
      ++kept;
    }
  }
  std::vector<SearchResult> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (keep[i]) out.push_back(std::move(sorted[i]));
  }
  return out;
}

ScoreBreakdown score_result(const SearchResult& result, const RankingContext& ctx, double rrf,
                            std::span<const std::string> extra_snippet) {
  ScoreBreakdown b;
  double total_weight = ctx.keywords.total_weight();
  auto title = tokenize_lemmas(result.title);
  auto snippet = tokenize_lemmas(result.snippet);
  auto url = url_tokens(result.url);

  // Extra terms are appended phrase by phrase so they never join with the
  // snippet text into a false multi-word match.
  auto snippet_field = snippet;
  for (const auto& extra : extra_snippet) {
    snippet_field.push_back("\x1f");
    auto words = tokenize_lemmas(extra);
    snippet_field.insert(snippet_field.end(), words.begin(), words.end());
  }

  b.rrf = std::clamp(rrf, 0.0, 1.0);
  b.cov_title = coverage(title, ctx.keywords, total_weight);
  b.cov_snippet = coverage(snippet_field, ctx.keywords, total_weight);
  b.cov_url = coverage(url, ctx.keywords, total_weight);

  std::size_t phrases = 0;
  std::size_t matched = 0;
  for (const auto& phrase : ctx.phrases) {
    if (phrase.empty()) continue;
    ++phrases;
    if (contains_phrase(title, phrase) || contains_phrase(snippet, phrase)) ++matched;
  }
  b.np_bonus = phrases == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(phrases);

  const auto& w = ctx.weights;
  b.total = w.rrf * b.rrf + w.title * b.cov_title + w.snippet * b.cov_snippet +
            w.url * b.cov_url + w.phrase * b.np_bonus;
  return b;
}

std::vector<RankedResult> fuse_and_rank(
    const std::map<std::size_t, std::vector<SearchResult>>& per_query,
    const RankingContext& ctx, std::size_t k_out, double rrf_k, const MetaKeywords& meta) {
  struct Entry {
    SearchResult best;
    std::map<std::size_t, std::size_t> rank_by_query;
  };
  std::map<std::string, Entry> merged;
  for (const auto& [qid, results] : per_query) {
    for (const auto& r : results) {
      auto key = normalize_url(r.url);
      if (key.empty()) continue;
      auto [it, inserted] = merged.try_emplace(key, Entry{r, {}});
      auto& e = it->second;
      if (!inserted) {
        // Deterministic choice of metadata, independent of arrival order.
        auto better = [](const SearchResult& a, const SearchResult& b) {
          if (a.snippet.size() != b.snippet.size()) return a.snippet.size() > b.snippet.size();
          if (a.title.size() != b.title.size()) return a.title.size() > b.title.size();
          return std::tie(a.snippet, a.title) < std::tie(b.snippet, b.title);
        };
        if (better(r, e.best)) e.best = r;
      }
      auto [rit, fresh] = e.rank_by_query.try_emplace(qid, r.backend_rank);
      if (!fresh) rit->second = std::min(rit->second, r.backend_rank);
    }
  }

  std::vector<std::pair<std::string, double>> raw;
  double max_raw = 0.0;
  for (const auto& [key, e] : merged) {
    double sum = 0.0;
    for (const auto& [qid, rank] : e.rank_by_query) {
      sum += 1.0 / (rrf_k + static_cast<double>(rank));
    }
    raw.emplace_back(key, sum);
    max_raw = std::max(max_raw, sum);
  }

  std::vector<RankedResult> out;
  for (const auto& [key, sum] : raw) {
    const auto& e = merged.at(key);
    std::vector<std::string> extra;
    if (meta) extra = meta(e.best.url);
    RankedResult r;
    r.url = key;
    r.title = e.best.title;
    r.snippet = e.best.snippet;
    r.breakdown = score_result(e.best, ctx, max_raw > 0 ? sum / max_raw : 0.0, extra);
    for (const auto& [qid, rank] : e.rank_by_query) r.query_ids.push_back(qid);
    out.push_back(std::move(r));
  }

  // Totals are compared on a grid relative to the weight sum, so scaling
  // every weight by the same factor cannot reorder near-ties.
  double wsum = ctx.weights.sum();
  auto key_of = [&](const RankedResult& r) {
    return wsum > 0 ? std::llround(r.breakdown.total / wsum * 1e9) : 0LL;
  };
  std::sort(out.begin(), out.end(), [&](const RankedResult& a, const RankedResult& b) {
    auto ka = key_of(a);
    auto kb = key_of(b);
    if (ka != kb) return ka > kb;
    return a.url < b.url;
  });
  if (out.size() > k_out) out.resize(k_out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].final_rank = i + 1;
  return out;
}

}  // namespace sieu
