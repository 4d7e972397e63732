#include "sieu/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sieu/error.hpp"
#include "sieu/url.hpp"

namespace sieu {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

bool skip_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto first = line.find_first_not_of(" \t");
  return first == std::string::npos || line[first] == '#';
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read " + path.string());
  return in;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

// "q2" sorts before "q10".
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
      nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

}  // namespace

RunFile parse_run(std::istream& in, std::string system, const std::string& source) {
  std::map<std::string, std::vector<std::pair<long, std::string>>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto f = split_tabs(line);
    if (f.size() != 3) throw ParseError(source, lineno, 0, "expected qid<TAB>rank<TAB>url");
    long rank = 0;
    try {
      std::size_t used = 0;
      rank = std::stol(f[1], &used);
      if (used != f[1].size() || rank < 1) throw std::invalid_argument("rank");
    } catch (const std::exception&) {
      throw ParseError(source, lineno, f[0].size() + 2, "rank must be a positive integer");
    }
    auto url = normalize_url(f[2]);
    if (f[0].empty() || url.empty()) throw ParseError(source, lineno, 0, "empty field");
    raw[f[0]].emplace_back(rank, url);
  }
  RunFile run;
  run.system = std::move(system);
  for (auto& [qid, list] : raw) {
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& urls = run.queries[qid];
    for (auto& [rank, url] : list) {
      if (std::find(urls.begin(), urls.end(), url) == urls.end()) urls.push_back(url);
    }
  }
  return run;
}

RunFile load_run(const std::filesystem::path& path, std::string system) {
  auto in = open(path);
  if (system.empty()) system = path.stem().string();
  return parse_run(in, std::move(system), path.string());
}

JudgmentSet parse_judgments(std::istream& in, const std::string& source) {
  JudgmentSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto f = split_tabs(line);
    if (f.size() != 2) throw ParseError(source, lineno, 0, "expected qid<TAB>url");
    auto url = normalize_url(f[1]);
    if (f[0].empty() || url.empty()) throw ParseError(source, lineno, 0, "empty field");
    out[f[0]].insert(url);
  }
  return out;
}

JudgmentSet load_judgments(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_judgments(in, path.string());
}

double precision(std::span<const std::string> retrieved, const std::set<std::string>& relevant) {
  std::set<std::string> unique(retrieved.begin(), retrieved.end());
  if (unique.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& u : unique) hits += relevant.contains(u) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(unique.size());
}

double relative_recall(std::span<const std::string> retrieved,
                       const std::set<std::string>& pool) {
  if (pool.empty()) throw ValidationError("relative recall is undefined for an empty relevant pool");
  std::set<std::string> unique(retrieved.begin(), retrieved.end());
  std::size_t hits = 0;
  for (const auto& u : unique) hits += pool.contains(u) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pool.size());
}

std::string EvalReport::csv() const {
  std::ostringstream out;
  out << "query,system,precision,recall\n";
  out << std::setprecision(6) << std::fixed;
  for (const auto& r : rows) {
    out << csv_field(r.query) << ',' << csv_field(r.system) << ',' << r.precision << ','
        << r.recall << '\n';
  }
  return out.str();
}

nlohmann::json EvalReport::plot_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [system, points] : plot) {
    nlohmann::json series = nlohmann::json::array();
    for (const auto& p : points) series.push_back({{"recall", p.recall}, {"precision", p.precision}});
    j["series"][system] = series;
  }
  for (const auto& [system, s] : systems) {
    j["averages"][system] = {{"precision", s.mean_precision},
                             {"recall", s.mean_recall},
                             {"queries", s.queries}};
  }
  return j;
}

EvalReport summarize(std::span<const EvalRow> rows, std::size_t plot_queries) {
  if (rows.empty()) throw ValidationError("nothing to summarize");
  EvalReport report;
  report.rows.assign(rows.begin(), rows.end());
  std::map<std::string, std::pair<double, double>> sums;
  for (const auto& r : rows) {
    auto& s = report.systems[r.system];
    ++s.queries;
    sums[r.system].first += r.precision;
    sums[r.system].second += r.recall;
    auto& series = report.plot[r.system];
    if (series.size() < plot_queries) series.push_back({r.recall, r.precision});
  }
  for (auto& [system, s] : report.systems) {
    s.mean_precision = sums[system].first / static_cast<double>(s.queries);
    s.mean_recall = sums[system].second / static_cast<double>(s.queries);
  }
  return report;
}

std::vector<EvalRow> evaluate_runs(const RunFile& a, const RunFile& b,
                                   const JudgmentSet& judgments) {
  std::vector<EvalRow> rows;
  static const std::vector<std::string> kNone;
  std::vector<std::string> qids;
  for (const auto& [qid, pool] : judgments) qids.push_back(qid);
  std::sort(qids.begin(), qids.end(), natural_less);
  for (const auto& qid : qids) {
    const auto& pool = judgments.at(qid);
    for (const auto* run : {&a, &b}) {
      auto it = run->queries.find(qid);
      const auto& urls = it == run->queries.end() ? kNone : it->second;
      rows.push_back({qid, run->system, precision(urls, pool), relative_recall(urls, pool)});
    }
  }
  return rows;
}

}  // namespace sieu
