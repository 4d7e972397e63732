#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sieu/ranking.hpp"
#include "sieu/search.hpp"

namespace sieu {

/// Directory holding the bundled data files.
std::filesystem::path default_data_dir();

enum class BackendKind { Corpus, Live };

struct PathsConfig {
  std::vector<std::filesystem::path> ontology;
  std::filesystem::path wordnet;  // empty disables the lexicon
  std::filesystem::path stoplist;
  std::filesystem::path tag_lexicon;
  std::filesystem::path corpus;  // manifest.json or a saved index
};

struct PipelineConfig {
  std::size_t q_max = 16;
  std::size_t e_max = 5;
  int depth = 1;
  bool siblings = true;
  std::size_t k_per_query = 10;
  std::size_t k_out = 20;
  std::size_t theta = 1;
  std::size_t k_min = 5;
  double rrf_k = 60.0;
  ScoreWeights weights;
  bool deep_scoring = false;
  bool concurrent = true;
};

struct ServiceConfig {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
  std::filesystem::path static_dir;  // optional UI bundle
};

struct Config {
  PathsConfig paths;
  BackendKind backend = BackendKind::Corpus;
  HttpBackendConfig live;
  PipelineConfig pipeline;
  ServiceConfig service;
  std::vector<std::string> warnings;  // unknown keys

  /// Bundled data files, corpus backend, default parameters.
  static Config defaults();
};

/// Relative paths resolve against `base`; absent sections keep defaults.
/// Throws ConfigError naming the offending key.
Config parse_config(const nlohmann::json& j, const std::filesystem::path& base);
Config load_config(const std::filesystem::path& path);

/// Throws ConfigError on negative weights, zero limits or missing paths.
void validate(const Config& config);

nlohmann::json config_to_json(const Config& config);

}  // namespace sieu
