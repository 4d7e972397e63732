#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace sieu {

/// query id -> ranked, normalized, duplicate-free urls.
struct RunFile {
  std::string system;
  std::map<std::string, std::vector<std::string>> queries;
};

/// query id -> pooled relevant urls.
using JudgmentSet = std::map<std::string, std::set<std::string>>;

/// Lines are `qid<TAB>rank<TAB>url`; blank lines and `#` comments skipped.
RunFile parse_run(std::istream& in, std::string system, const std::string& source = "<run>");
RunFile load_run(const std::filesystem::path& path, std::string system = {});
/// Lines are `qid<TAB>url`.
JudgmentSet parse_judgments(std::istream& in, const std::string& source = "<judgments>");
JudgmentSet load_judgments(const std::filesystem::path& path);

/// |retrieved ∩ relevant| / |retrieved|, 0 for an empty retrieval.
double precision(std::span<const std::string> retrieved, const std::set<std::string>& relevant);
/// |retrieved ∩ pool| / |pool|; throws ValidationError for an empty pool.
double relative_recall(std::span<const std::string> retrieved,
                       const std::set<std::string>& pool);

struct EvalRow {
  std::string query;
  std::string system;
  double precision = 0.0;
  double recall = 0.0;
};

struct PlotPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct SystemSummary {
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  std::size_t queries = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // input order
  std::map<std::string, SystemSummary> systems;
  /// (recall, precision) per system, in query order, first `plot_queries`.
  std::map<std::string, std::vector<PlotPoint>> plot;

  std::string csv() const;
  nlohmann::json plot_json() const;
};

/// Throws ValidationError when `rows` is empty.
EvalReport summarize(std::span<const EvalRow> rows, std::size_t plot_queries = 5);

/// Scores both runs over every judged query.
std::vector<EvalRow> evaluate_runs(const RunFile& a, const RunFile& b,
                                   const JudgmentSet& judgments);

}  // namespace sieu
