#include "sieu/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>

#include "sieu/config.hpp"
#include "sieu/engine.hpp"
#include "sieu/error.hpp"
#include "sieu/evaluation.hpp"
#include "sieu/service.hpp"

namespace sieu {

namespace {

struct Overrides {
  std::string config;
  std::vector<std::string> ontology;
  std::string wordnet;
  std::string corpus;
  std::optional<std::size_t> q_max;
  std::optional<std::size_t> e_max;
  std::optional<std::size_t> k_per_query;
  std::optional<int> depth;
  bool no_siblings = false;
  bool deep = false;
  bool sequential = false;
};

Config resolve_config(const Overrides& o, std::ostream& err) {
  Config c = o.config.empty() ? Config::defaults() : load_config(o.config);
  for (const auto& w : c.warnings) err << "warning: " << w << '\n';
  if (!o.ontology.empty()) c.paths.ontology.assign(o.ontology.begin(), o.ontology.end());
  if (!o.wordnet.empty()) c.paths.wordnet = o.wordnet;
  if (!o.corpus.empty()) c.paths.corpus = o.corpus;
  if (o.q_max) c.pipeline.q_max = *o.q_max;
  if (o.e_max) c.pipeline.e_max = *o.e_max;
  if (o.k_per_query) c.pipeline.k_per_query = *o.k_per_query;
  if (o.depth) c.pipeline.depth = *o.depth;
  if (o.no_siblings) c.pipeline.siblings = false;
  if (o.deep) c.pipeline.deep_scoring = true;
  if (o.sequential) c.pipeline.concurrent = false;
  validate(c);
  return c;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LoadError("cannot write " + path);
  f << content;
  if (!f) throw LoadError("error writing " + path);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ontology-driven semantic search over a university domain", "sieu"};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("-c,--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--ontology", o.ontology, "Turtle ontology file; repeat to merge several")
      ->check(CLI::ExistingFile);
  app.add_option("--wordnet", o.wordnet, "WordNet database directory")->check(CLI::ExistingDirectory);
  app.add_option("--corpus", o.corpus, "corpus manifest or saved index")->check(CLI::ExistingFile);
  app.add_option("--q-max", o.q_max, "maximum number of refined queries");
  app.add_option("--e-max", o.e_max, "expansions per term, the term itself included");
  app.add_option("--k-per-query", o.k_per_query, "results taken per refined query");
  app.add_option("--depth", o.depth, "ontology hierarchy depth");
  app.add_flag("--no-siblings", o.no_siblings, "skip sibling concepts");
  app.add_flag("--deep", o.deep, "score page meta keywords");
  app.add_flag("--sequential", o.sequential, "issue backend calls one at a time");

  std::string query;
  std::string format = "text";
  std::optional<std::size_t> k;
  auto* search = app.add_subcommand("search", "run the full pipeline");
  search->add_option("query", query, "natural-language query")->required();
  search->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  search->add_option("-k,--k", k, "number of ranked results");

  auto* expand = app.add_subcommand("expand", "show analysis, expansions and refined queries");
  expand->add_option("query", query, "natural-language query")->required();
  expand->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  std::string run_a, run_b, judgments, csv_out, plot_out, name_a, name_b;
  std::size_t plot_queries = 5;
  auto* eval = app.add_subcommand("eval", "precision and relative recall of two runs");
  eval->add_option("--run-a", run_a, "run file of the first system")->required()->check(CLI::ExistingFile);
  eval->add_option("--run-b", run_b, "run file of the second system")->required()->check(CLI::ExistingFile);
  eval->add_option("--judgments", judgments, "pooled relevance judgments")->required()->check(CLI::ExistingFile);
  eval->add_option("--csv", csv_out, "per-query CSV output");
  eval->add_option("--plot-data", plot_out, "precision/recall series as JSON");
  eval->add_option("--name-a", name_a, "label of the first system");
  eval->add_option("--name-b", name_b, "label of the second system");
  eval->add_option("--plot-queries", plot_queries, "queries per plot series");

  std::string manifest, index_out;
  auto* index = app.add_subcommand("index", "build a corpus index file from a manifest");
  index->add_option("--manifest", manifest, "corpus manifest (default: configured corpus)");
  index->add_option("-o,--out", index_out, "output file")->required();

  std::string bind;
  std::optional<int> port;
  auto* serve = app.add_subcommand("serve", "start the HTTP service");
  serve->add_option("--bind", bind, "address to bind");
  serve->add_option("--port", port, "port, 0 for any free port")->check(CLI::Range(0, 65535));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*eval) {
      auto a = load_run(run_a, name_a);
      auto b = load_run(run_b, name_b);
      auto rows = evaluate_runs(a, b, load_judgments(judgments));
      auto report = summarize(rows, plot_queries);
      if (!csv_out.empty()) write_file(csv_out, report.csv());
      if (!plot_out.empty()) write_file(plot_out, report.plot_json().dump(2) + "\n");
      out << report.csv() << '\n';
      for (const auto& [system, s] : report.systems) {
        out << system << ": mean precision " << s.mean_precision << ", mean recall "
            << s.mean_recall << " over " << s.queries << " queries\n";
      }
      return 0;
    }

    auto config = resolve_config(o, err);

    if (*index) {
      auto path = manifest.empty() ? config.paths.corpus : std::filesystem::path(manifest);
      auto built = CorpusIndex::build(load_corpus_manifest(path));
      write_file(index_out, built.to_json().dump() + "\n");
      out << "indexed " << built.size() << " documents, " << built.term_count() << " terms\n";
      return 0;
    }

    auto engine = std::make_shared<const Engine>(Engine::load(config));

    if (*search) {
      auto r = engine->search(query, k);
      out << (format == "json" ? to_json(r).dump(2) + "\n" : format_text(r));
      return 0;
    }
    if (*expand) {
      auto r = engine->expand(query);
      out << (format == "json" ? expand_to_json(r).dump(2) + "\n" : format_text(r));
      return 0;
    }
    if (*serve) {
      Service service(engine);
      auto host = bind.empty() ? config.service.bind : bind;
      int bound = service.bind(host, port.value_or(config.service.port));
      out << "listening on http://" << host << ':' << bound << std::endl;
      service.listen();
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace sieu
