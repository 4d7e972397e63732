#include <httplib.h>

#include "sieu/error.hpp"
#include "sieu/search.hpp"
#include "sieu/url.hpp"

namespace sieu {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path?query
};

std::optional<SplitUrl> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return std::nullopt;
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") return std::nullopt;
  auto path = url.find_first_of("/?", scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path);
  out.target = path == std::string::npos ? "/" : url.substr(path);
  if (out.target.front() == '?') out.target.insert(0, "/");
  if (out.origin.size() <= scheme_end + 3) return std::nullopt;
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string string_field(const nlohmann::json& item, const std::string& field) {
  auto it = item.find(field);
  if (it == item.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (!split_url(config_.endpoint_template)) {
    throw ConfigError("backend.endpoint_template",
                      "must be an absolute http(s) url, got \"" + config_.endpoint_template + "\"");
  }
  if (config_.timeout_ms <= 0) throw ConfigError("backend.timeout_ms", "must be positive");
  if (config_.retries < 0) throw ConfigError("backend.retries", "must be non-negative");
}

std::string HttpBackend::request_url(const RefinedQuery& query, std::size_t k) const {
  auto url = config_.endpoint_template;
  replace_all(url, "{q}", url_encode(query.text()));
  replace_all(url, "{k}", std::to_string(k));
  return url;
}

std::vector<SearchResult> HttpBackend::parse_response(std::string_view body,
                                                      std::size_t query_id,
                                                      std::size_t k) const {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw BackendError(query_id, "response is not valid JSON");
  const nlohmann::json* node = &j;
  std::size_t start = 0;
  const auto& path = config_.results_path;
  while (start < path.size()) {
    auto dot = path.find('.', start);
    if (dot == std::string::npos) dot = path.size();
    auto key = path.substr(start, dot - start);
    start = dot + 1;
    if (key.empty()) continue;
    if (!node->is_object() || !node->contains(key)) {
      // APIs commonly omit the array when there are no hits.
      return {};
    }
    node = &(*node)[key];
  }
  if (!node->is_array()) {
    throw BackendError(query_id, "\"" + path + "\" is not an array in the response");
  }
  std::vector<SearchResult> out;
  for (const auto& item : *node) {
    if (out.size() >= k) break;
    if (!item.is_object()) continue;
    auto url = string_field(item, config_.url_field);
    if (url.empty()) continue;
    out.push_back({url, string_field(item, config_.title_field),
                   string_field(item, config_.snippet_field), out.size() + 1, query_id});
  }
  return out;
}

std::vector<SearchResult> HttpBackend::search(const RefinedQuery& query, std::size_t k) const {
  if (query.terms.empty() || k == 0) return {};
  auto parts = split_url(request_url(query, k));
  if (!parts) throw BackendError(query.id, "bad request url");

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    httplib::Client client(parts->origin);
    auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_follow_location(true);
    auto res = client.Get(parts->target);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429) {
      last_error = "HTTP 429 (quota exceeded)";
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status < 500) break;  // client errors will not improve on retry
      continue;
    }
    return parse_response(res->body, query.id, k);
  }
  throw BackendError(query.id, last_error);
}

std::optional<std::string> HttpBackend::fetch_page(const std::string& url) const {
  if (!config_.fetch_pages) return std::nullopt;
  auto parts = split_url(url);
  if (!parts) return std::nullopt;
  httplib::Client client(parts->origin);
  auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_follow_location(true);
  auto res = client.Get(parts->target);
  if (!res || res->status != 200) return std::nullopt;
  return res->body;
}

}  // namespace sieu
