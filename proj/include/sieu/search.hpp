#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sieu/refinement.hpp"

namespace sieu {

struct SearchResult {
  std::string url;
  std::string title;
  std::string snippet;
  std::size_t backend_rank = 0;  // 1-based
  std::size_t query_id = 0;

  bool operator==(const SearchResult&) const = default;
};

/// Backends must be safe to call from several threads at once.
class SearchBackend {
 public:
  virtual ~SearchBackend() = default;

  virtual std::string name() const = 0;
  /// At most k results ranked 1..n. Live backends throw BackendError.
  virtual std::vector<SearchResult> search(const RefinedQuery& query, std::size_t k) const = 0;
  /// Raw page body for deep scoring, when the backend can supply one.
  virtual std::optional<std::string> fetch_page(const std::string& url) const;
};

// ------------------------------------------------------------ corpus index

struct CorpusDocument {
  std::string url;
  std::string title;
  std::string body;  // plain text
  std::string html;  // original markup, empty for text files
};

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct ScoredDoc {
  std::uint32_t doc = 0;
  double score = 0.0;
};

/// Inverted index over title + body terms. Immutable after build.
class CorpusIndex {
 public:
  /// Throws ValidationError on a duplicate url.
  static CorpusIndex build(std::vector<CorpusDocument> docs);

  std::size_t size() const { return docs_.size(); }
  const CorpusDocument& document(std::uint32_t doc) const { return docs_.at(doc); }
  /// Lookup by normalized url.
  std::optional<std::uint32_t> find(std::string_view url) const;
  std::span<const Posting> postings(std::string_view term) const;
  std::uint32_t doc_length(std::uint32_t doc) const { return lengths_.at(doc); }
  double avg_doc_length() const { return avg_length_; }
  std::size_t term_count() const { return postings_.size(); }
  /// Lowercased tokens of title + body, in order.
  const std::vector<std::string>& doc_terms(std::uint32_t doc) const { return terms_.at(doc); }

  /// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
  double idf(std::string_view term) const;
  double score(std::uint32_t doc, std::span<const std::string> query_terms,
               const Bm25Params& params = {}) const;
  /// Descending score, ties by doc id; zero-score documents are skipped.
  std::vector<ScoredDoc> top_k(std::span<const std::string> query_terms, std::size_t k,
                               const Bm25Params& params = {}) const;

  nlohmann::json to_json() const;
  static CorpusIndex from_json(const nlohmann::json& j);

 private:
  std::vector<CorpusDocument> docs_;
  std::vector<std::vector<std::string>> terms_;
  std::vector<std::uint32_t> lengths_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
  std::map<std::string, std::uint32_t, std::less<>> by_url_;
  double avg_length_ = 0.0;
};

/// Reads `[{"url", "title", "file"}]`; file paths are relative to the
/// manifest. HTML files are reduced to text; a missing title falls back to
/// the page <title>.
std::vector<CorpusDocument> load_corpus_manifest(const std::filesystem::path& manifest);

/// Unique query words of a refined query (multi-word terms split).
std::vector<std::string> query_words(const RefinedQuery& query);

/// A window of about `width` words around the densest run of query words.
std::string make_snippet(std::span<const std::string> words,
                         std::span<const std::string> query_terms, std::size_t width = 30);

class CorpusBackend : public SearchBackend {
 public:
  explicit CorpusBackend(std::shared_ptr<const CorpusIndex> index, Bm25Params params = {})
      : index_(std::move(index)), params_(params) {}

  std::string name() const override { return "corpus"; }
  std::vector<SearchResult> search(const RefinedQuery& query, std::size_t k) const override;
  std::optional<std::string> fetch_page(const std::string& url) const override;

  const CorpusIndex& index() const { return *index_; }

 private:
  std::shared_ptr<const CorpusIndex> index_;
  Bm25Params params_;
};

// -------------------------------------------------------------- live HTTP

struct HttpBackendConfig {
  /// e.g. "https://api.example.com/search?q={q}&n={k}"
  std::string endpoint_template;
  int timeout_ms = 10000;
  int retries = 1;
  /// Dot-separated path to the results array; empty means the root.
  std::string results_path = "items";
  std::string url_field = "link";
  std::string title_field = "title";
  std::string snippet_field = "snippet";
  bool fetch_pages = false;
};

/// JSON-over-HTTP search API client; one GET per refined query.
class HttpBackend : public SearchBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  std::string name() const override { return "live"; }
  std::vector<SearchResult> search(const RefinedQuery& query, std::size_t k) const override;
  std::optional<std::string> fetch_page(const std::string& url) const override;

  /// Expands {q} and {k}; the query is percent-encoded.
  std::string request_url(const RefinedQuery& query, std::size_t k) const;
  /// Maps a response body onto results; throws BackendError on bad JSON.
  std::vector<SearchResult> parse_response(std::string_view body, std::size_t query_id,
                                           std::size_t k) const;

 private:
  HttpBackendConfig config_;
};

}  // namespace sieu
