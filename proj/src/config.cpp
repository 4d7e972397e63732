#include "sieu/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "sieu/error.hpp"

#ifndef SIEU_DATA_DIR
#define SIEU_DATA_DIR "data"
#endif

namespace sieu {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Section {
 public:
  Section(const json& j, std::string prefix, std::vector<std::string>& warnings)
      : j_(j), prefix_(std::move(prefix)), warnings_(warnings) {
    if (!j_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "must be an object");
  }

  ~Section() {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) warnings_.push_back("unknown config key: " + name(key));
    }
  }

  std::string name(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, std::string& out) {
    if (auto* v = get(key)) {
      if (!v->is_string()) throw ConfigError(name(key), "must be a string");
      out = v->get<std::string>();
    }
  }

  void read(const std::string& key, bool& out) {
    if (auto* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(name(key), "must be true or false");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, double& out) {
    if (auto* v = get(key)) {
      if (!v->is_number()) throw ConfigError(name(key), "must be a number");
      out = v->get<double>();
    }
  }

  void read(const std::string& key, int& out) {
    if (auto* v = get(key)) {
      if (!v->is_number_integer()) throw ConfigError(name(key), "must be an integer");
      out = v->get<int>();
    }
  }

  void read(const std::string& key, std::size_t& out) {
    if (auto* v = get(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) {
        throw ConfigError(name(key), "must be a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  void read_path(const std::string& key, fs::path& out, const fs::path& base) {
    std::string s;
    if (!j_.contains(key)) {
      seen_.insert(key);
      return;
    }
    read(key, s);
    out = s.empty() ? fs::path{} : resolve(s, base);
  }

  static fs::path resolve(const std::string& s, const fs::path& base) {
    fs::path p(s);
    return p.is_absolute() ? p : (base / p).lexically_normal();
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& warnings_;
  std::set<std::string> seen_;
};

void require_path(const fs::path& p, const std::string& key) {
  if (!p.empty() && !fs::exists(p)) throw ConfigError(key, "path does not exist: " + p.string());
}

}  // namespace

fs::path default_data_dir() {
  if (const char* env = std::getenv("SIEU_DATA_DIR"); env && *env) return env;
  return SIEU_DATA_DIR;
}

Config Config::defaults() {
  auto data = default_data_dir();
  Config c;
  c.paths.ontology = {data / "ontology" / "university.ttl"};
  c.paths.wordnet = data / "wordnet";
  c.paths.stoplist = data / "stoplist.txt";
  c.paths.tag_lexicon = data / "tag_lexicon.tsv";
  c.paths.corpus = data / "corpus" / "manifest.json";
  return c;
}

Config parse_config(const json& j, const fs::path& base) {
  Config c = Config::defaults();
  Section root(j, "", c.warnings);

  if (auto* p = root.get("paths")) {
    Section s(*p, "paths", c.warnings);
    if (auto* onto = s.get("ontology")) {
      c.paths.ontology.clear();
      if (onto->is_string()) {
        c.paths.ontology.push_back(Section::resolve(onto->get<std::string>(), base));
      } else if (onto->is_array()) {
        for (const auto& item : *onto) {
          if (!item.is_string()) throw ConfigError("paths.ontology", "entries must be strings");
          c.paths.ontology.push_back(Section::resolve(item.get<std::string>(), base));
        }
      } else {
        throw ConfigError("paths.ontology", "must be a string or a list of strings");
      }
    }
    s.read_path("wordnet", c.paths.wordnet, base);
    s.read_path("stoplist", c.paths.stoplist, base);
    s.read_path("tag_lexicon", c.paths.tag_lexicon, base);
    s.read_path("corpus", c.paths.corpus, base);
  }

  if (auto* b = root.get("backend")) {
    Section s(*b, "backend", c.warnings);
    std::string kind = "corpus";
    s.read("kind", kind);
    if (kind == "corpus") {
      c.backend = BackendKind::Corpus;
    } else if (kind == "live") {
      c.backend = BackendKind::Live;
    } else {
      throw ConfigError("backend.kind", "must be \"corpus\" or \"live\"");
    }
    s.read("endpoint_template", c.live.endpoint_template);
    s.read("timeout_ms", c.live.timeout_ms);
    s.read("retries", c.live.retries);
    s.read("results_path", c.live.results_path);
    s.read("url_field", c.live.url_field);
    s.read("title_field", c.live.title_field);
    s.read("snippet_field", c.live.snippet_field);
    s.read("fetch_pages", c.live.fetch_pages);
  }

  if (auto* p = root.get("pipeline")) {
    Section s(*p, "pipeline", c.warnings);
    s.read("q_max", c.pipeline.q_max);
    s.read("e_max", c.pipeline.e_max);
    s.read("depth", c.pipeline.depth);
    s.read("siblings", c.pipeline.siblings);
    s.read("k_per_query", c.pipeline.k_per_query);
    s.read("k_out", c.pipeline.k_out);
    s.read("theta", c.pipeline.theta);
    s.read("k_min", c.pipeline.k_min);
    s.read("rrf_k", c.pipeline.rrf_k);
    s.read("deep_scoring", c.pipeline.deep_scoring);
    s.read("concurrent", c.pipeline.concurrent);
    if (auto* w = s.get("weights")) {
      Section ws(*w, "pipeline.weights", c.warnings);
      ws.read("rrf", c.pipeline.weights.rrf);
      ws.read("title", c.pipeline.weights.title);
      ws.read("snippet", c.pipeline.weights.snippet);
      ws.read("url", c.pipeline.weights.url);
      ws.read("phrase", c.pipeline.weights.phrase);
    }
  }

  if (auto* v = root.get("service")) {
    Section s(*v, "service", c.warnings);
    s.read("bind", c.service.bind);
    s.read("port", c.service.port);
    s.read("cors_origin", c.service.cors_origin);
    s.read_path("static_dir", c.service.static_dir, base);
  }

  validate(c);
  return c;
}

Config load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, 0, e.what());
  }
  return parse_config(j, path.parent_path());
}

void validate(const Config& c) {
  const auto& p = c.pipeline;
  auto non_negative = [](double v, const char* key) {
    if (!(v >= 0)) throw ConfigError(key, "must be non-negative");
  };
  non_negative(p.weights.rrf, "pipeline.weights.rrf");
  non_negative(p.weights.title, "pipeline.weights.title");
  non_negative(p.weights.snippet, "pipeline.weights.snippet");
  non_negative(p.weights.url, "pipeline.weights.url");
  non_negative(p.weights.phrase, "pipeline.weights.phrase");
  if (p.weights.sum() <= 0) throw ConfigError("pipeline.weights", "at least one weight must be positive");
  if (p.q_max == 0) throw ConfigError("pipeline.q_max", "must be at least 1");
  if (p.e_max == 0) throw ConfigError("pipeline.e_max", "must be at least 1");
  if (p.depth < 0) throw ConfigError("pipeline.depth", "must be non-negative");
  if (p.k_per_query == 0) throw ConfigError("pipeline.k_per_query", "must be at least 1");
  if (p.k_out == 0) throw ConfigError("pipeline.k_out", "must be at least 1");
  if (!(p.rrf_k > 0)) throw ConfigError("pipeline.rrf_k", "must be positive");
  if (c.service.port < 0 || c.service.port > 65535) throw ConfigError("service.port", "must be 0..65535");

  if (c.paths.ontology.empty()) throw ConfigError("paths.ontology", "at least one ontology file is required");
  for (const auto& o : c.paths.ontology) require_path(o, "paths.ontology");
  require_path(c.paths.wordnet, "paths.wordnet");
  require_path(c.paths.stoplist, "paths.stoplist");
  require_path(c.paths.tag_lexicon, "paths.tag_lexicon");
  if (c.backend == BackendKind::Corpus) {
    if (c.paths.corpus.empty()) throw ConfigError("paths.corpus", "required for the corpus backend");
    require_path(c.paths.corpus, "paths.corpus");
  } else {
    if (c.live.endpoint_template.empty()) {
      throw ConfigError("backend.endpoint_template", "required for the live backend");
    }
    if (c.live.timeout_ms <= 0) throw ConfigError("backend.timeout_ms", "must be positive");
    if (c.live.retries < 0) throw ConfigError("backend.retries", "must be non-negative");
  }
  require_path(c.service.static_dir, "service.static_dir");
}

json config_to_json(const Config& c) {
  json onto = json::array();
  for (const auto& o : c.paths.ontology) onto.push_back(o.string());
  const auto& p = c.pipeline;
  return {
      {"paths",
       {{"ontology", onto},
        {"wordnet", c.paths.wordnet.string()},
        {"stoplist", c.paths.stoplist.string()},
        {"tag_lexicon", c.paths.tag_lexicon.string()},
        {"corpus", c.paths.corpus.string()}}},
      {"backend",
       {{"kind", c.backend == BackendKind::Corpus ? "corpus" : "live"},
        {"endpoint_template", c.live.endpoint_template},
        {"timeout_ms", c.live.timeout_ms},
        {"retries", c.live.retries},
        {"results_path", c.live.results_path},
        {"url_field", c.live.url_field},
        {"title_field", c.live.title_field},
        {"snippet_field", c.live.snippet_field},
        {"fetch_pages", c.live.fetch_pages}}},
      {"pipeline",
       {{"q_max", p.q_max},
        {"e_max", p.e_max},
        {"depth", p.depth},
        {"siblings", p.siblings},
        {"k_per_query", p.k_per_query},
        {"k_out", p.k_out},
        {"theta", p.theta},
        {"k_min", p.k_min},
        {"rrf_k", p.rrf_k},
        {"weights",
         {{"rrf", p.weights.rrf},
          {"title", p.weights.title},
          {"snippet", p.weights.snippet},
          {"url", p.weights.url},
          {"phrase", p.weights.phrase}}},
        {"deep_scoring", p.deep_scoring},
        {"concurrent", p.concurrent}}},
      {"service",
       {{"bind", c.service.bind},
        {"port", c.service.port},
        {"cors_origin", c.service.cors_origin},
        {"static_dir", c.service.static_dir.string()}}},
  };
}

}  // namespace sieu
