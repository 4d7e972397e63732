#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "sieu/config.hpp"
#include "sieu/engine.hpp"

namespace sieu::test {

inline std::filesystem::path data_dir() { return SIEU_TEST_DATA_DIR; }

inline Config bundled_config() {
  auto c = Config::defaults();
  c.paths.ontology = {data_dir() / "ontology" / "university.ttl"};
  c.paths.wordnet = data_dir() / "wordnet";
  c.paths.stoplist = data_dir() / "stoplist.txt";
  c.paths.tag_lexicon = data_dir() / "tag_lexicon.tsv";
  c.paths.corpus = data_dir() / "corpus" / "manifest.json";
  return c;
}

/// Loaded once per test binary.
inline const Engine& bundled_engine() {
  static const Engine engine = Engine::load(bundled_config());
  return engine;
}

}  // namespace sieu::test
