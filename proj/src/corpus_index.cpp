#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "sieu/error.hpp"
#include "sieu/html.hpp"
#include "sieu/search.hpp"
#include "sieu/text_analysis.hpp"
#include "sieu/url.hpp"

namespace sieu {

CorpusIndex CorpusIndex::build(std::vector<CorpusDocument> docs) {
  CorpusIndex index;
  std::uint64_t total = 0;
  for (std::uint32_t id = 0; id < docs.size(); ++id) {
    auto& doc = docs[id];
    auto key = normalize_url(doc.url);
    if (key.empty()) throw ValidationError("document " + std::to_string(id) + " has an empty url");
    if (!index.by_url_.emplace(key, id).second) {
      throw ValidationError("duplicate url in corpus: " + doc.url);
    }
    auto terms = tokenize_lemmas(doc.title);
    auto body = tokenize_lemmas(doc.body);
    terms.insert(terms.end(), body.begin(), body.end());

    std::map<std::string, std::uint32_t> tf;
    for (const auto& t : terms) ++tf[t];
    for (const auto& [term, count] : tf) {
      index.postings_[term].push_back({id, count});
    }
    index.lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
    total += terms.size();
    index.terms_.push_back(std::move(terms));
  }
  index.docs_ = std::move(docs);
  index.avg_length_ =
      index.docs_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(index.docs_.size());
  return index;
}

std::optional<std::uint32_t> CorpusIndex::find(std::string_view url) const {
  auto it = by_url_.find(normalize_url(url));
  if (it == by_url_.end()) return std::nullopt;
  return it->second;
}

std::span<const Posting> CorpusIndex::postings(std::string_view term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

double CorpusIndex::idf(std::string_view term) const {
  double n = static_cast<double>(docs_.size());
  double df = static_cast<double>(postings(term).size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double CorpusIndex::score(std::uint32_t doc, std::span<const std::string> query_terms,
                          const Bm25Params& params) const {
  std::set<std::string_view> seen;
  double total = 0.0;
  double len = lengths_.at(doc);
  for (const auto& term : query_terms) {
    if (!seen.insert(term).second) continue;
    auto list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, std::uint32_t d) { return p.doc < d; });
    if (it == list.end() || it->doc != doc) continue;
    double tf = it->tf;
    double norm = avg_length_ > 0 ? len / avg_length_ : 0.0;
    total += idf(term) * tf * (params.k1 + 1) / (tf + params.k1 * (1 - params.b + params.b * norm));
  }
  return total;
}

std::vector<ScoredDoc> CorpusIndex::top_k(std::span<const std::string> query_terms, std::size_t k,
                                          const Bm25Params& params) const {
  std::set<std::uint32_t> candidates;
  for (const auto& term : query_terms) {
    for (const auto& p : postings(term)) candidates.insert(p.doc);
  }
  std::vector<ScoredDoc> out;
  for (auto doc : candidates) {
    double s = score(doc, query_terms, params);
    if (s > 0) out.push_back({doc, s});
  }
  std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc < b.doc;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

nlohmann::json CorpusIndex::to_json() const {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : docs_) {
    docs.push_back({{"url", d.url}, {"title", d.title}, {"body", d.body}, {"html", d.html}});
  }
  nlohmann::json postings = nlohmann::json::object();
  for (const auto& [term, list] : postings_) {
    auto& arr = postings[term] = nlohmann::json::array();
    for (const auto& p : list) arr.push_back({p.doc, p.tf});
  }
  return {{"documents", docs},
          {"doc_lengths", lengths_},
          {"avg_doc_length", avg_length_},
          {"postings", postings}};
}

CorpusIndex CorpusIndex::from_json(const nlohmann::json& j) {
  try {
    std::vector<CorpusDocument> docs;
    for (const auto& d : j.at("documents")) {
      docs.push_back({d.at("url").get<std::string>(), d.at("title").get<std::string>(),
                      d.at("body").get<std::string>(), d.value("html", std::string{})});
    }
    return build(std::move(docs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<index>", 0, 0, e.what());
  }
}

std::vector<CorpusDocument> load_corpus_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw LoadError("cannot read corpus manifest " + manifest.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(manifest.string(), 0, 0, e.what());
  }
  if (!j.is_array()) throw ParseError(manifest.string(), 0, 0, "manifest must be a JSON array");

  auto base = manifest.parent_path();
  std::vector<CorpusDocument> docs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& entry = j[i];
    auto where = "entry " + std::to_string(i);
    if (!entry.is_object() || !entry.contains("url") || !entry.contains("file")) {
      throw ParseError(manifest.string(), 0, 0, where + ": needs \"url\" and \"file\"");
    }
    auto path = base / entry["file"].get<std::string>();
    std::ifstream f(path, std::ios::binary);
    if (!f) throw LoadError("cannot read corpus document " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    auto raw = ss.str();

    CorpusDocument doc;
    doc.url = entry["url"].get<std::string>();
    doc.title = entry.value("title", std::string{});
    auto ext = to_lower(path.extension().string());
    if (ext == ".html" || ext == ".htm") {
      doc.html = raw;
      doc.body = html_to_text(raw);
      auto meta = extract_page_meta(raw);
      if (doc.title.empty()) doc.title = meta.title;
      // The page title is repeated in the text run; keep it out of the body.
      if (!meta.title.empty() && doc.body.starts_with(meta.title)) {
        doc.body.erase(0, meta.title.size());
        if (!doc.body.empty() && doc.body.front() == ' ') doc.body.erase(0, 1);
      }
    } else {
      doc.body = raw;
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<std::string> query_words(const RefinedQuery& query) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& term : query.terms) {
    for (auto& w : tokenize_lemmas(term)) {
      if (seen.insert(w).second) out.push_back(std::move(w));
    }
  }
  return out;
}

std::string make_snippet(std::span<const std::string> words,
                         std::span<const std::string> query_terms, std::size_t width) {
  if (words.empty()) return {};
  width = std::max<std::size_t>(width, 1);
  std::set<std::string, std::less<>> wanted(query_terms.begin(), query_terms.end());
  std::vector<int> hit(words.size(), 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (const auto& t : tokenize_lemmas(words[i])) {
      if (wanted.contains(t)) {
        hit[i] = 1;
        break;
      }
    }
  }
  std::size_t n = std::min(width, words.size());
  int current = 0;
  for (std::size_t i = 0; i < n; ++i) current += hit[i];
  int best = current;
  std::size_t best_start = 0;
  for (std::size_t start = 1; start + n <= words.size(); ++start) {
    current += hit[start + n - 1] - hit[start - 1];
    if (current > best) {
      best = current;
      best_start = start;
    }
  }
  std::string out = best_start > 0 ? "... " : "";
  out += join(words.subspan(best_start, n), " ");
  if (best_start + n < words.size()) out += " ...";
  return out;
}

std::optional<std::string> SearchBackend::fetch_page(const std::string&) const {
  return std::nullopt;
}

std::vector<SearchResult> CorpusBackend::search(const RefinedQuery& query, std::size_t k) const {
  auto terms = query_words(query);
  std::vector<SearchResult> out;
  std::size_t rank = 0;
  for (const auto& hit : index_->top_k(terms, k, params_)) {
    const auto& doc = index_->document(hit.doc);
    std::istringstream body(doc.body);
    std::vector<std::string> words{std::istream_iterator<std::string>(body),
                                   std::istream_iterator<std::string>()};
    out.push_back({doc.url, doc.title, make_snippet(words, terms), ++rank, query.id});
  }
  return out;
}

std::optional<std::string> CorpusBackend::fetch_page(const std::string& url) const {
  auto id = index_->find(url);
  if (!id) return std::nullopt;
  const auto& doc = index_->document(*id);
  return doc.html.empty() ? doc.body : doc.html;
}

}  // namespace sieu
