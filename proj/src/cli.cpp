#include "ludemic/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "ludemic/cluster.hpp"
#include "ludemic/corpus.hpp"
#include "ludemic/dataset.hpp"
#include "ludemic/error.hpp"
#include "ludemic/evaluation.hpp"
#include "ludemic/seeding.hpp"
#include "ludemic/tournament.hpp"

namespace ludemic::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string corpus;
  std::string output;
  std::string features;
  std::string results;
  std::uint64_t seed = 42;
  int depth = 2;
  int threads = 0;
  int games_per_combination = 0;
  std::vector<std::string> games;
  std::vector<std::string> algorithms;
  double perplexity = 0.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double eps = 0.0;
  int min_points = 4;
  int max_depth = 3;
};

int thread_count(const Options& o) { return o.threads > 0 ? o.threads : default_thread_count(); }

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto corpus = load_corpus(o.corpus);
  int failures = 0;
  for (const auto& g : corpus) {
    out << g.file << ": ";
    if (!g.diagnostic.empty()) {
      ++failures;
      out << "FAIL " << g.diagnostic << '\n';
    } else if (g.parse_only) {
      out << "parse-only (compiles=false) \"" << g.name << "\" unsupported ludeme '" << g.unsupported << "'\n";
    } else {
      out << "ok \"" << g.name << "\" players=" << g.spec->players << " board=" << g.spec->board.rows() << "x"
          << g.spec->board.cols() << '\n';
    }
  }
  out << corpus.size() << " games, " << failures << " failed\n";
  return failures == 0 ? kOk : kDataError;
}

std::vector<CorpusGame> load_checked(const std::string& dir) {
  auto corpus = load_corpus(dir);
  for (const auto& g : corpus)
    if (!g.diagnostic.empty()) throw Error(ErrorCode::InvalidDescription, g.file + ": " + g.diagnostic);
  return corpus;
}

int cmd_ludemes(const Options& o, std::ostream& out) {
  const auto corpus = load_checked(o.corpus);
  std::vector<std::pair<std::string, gdl::LudemeTree>> trees;
  for (const auto& g : corpus) trees.emplace_back(g.name, *g.tree);
  const auto features = build_feature_matrix(trees);
  const std::string comment = "ludemes corpus=" + fs::path(o.corpus).lexically_normal().string() +
                              " games=" + std::to_string(features.rows()) +
                              " ludemes=" + std::to_string(features.cols()) + " seed=none";
  write_file(o.output, write_csv(features, comment));
  out << "wrote " << o.output << " (" << features.rows() << " games x " << features.cols() << " ludemes)\n";
  return kOk;
}

int cmd_tournament(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = load_checked(o.corpus);
  TournamentOptions options;
  options.search.depth = o.depth;
  options.threads = thread_count(o);
  std::optional<int> per_combination;
  if (o.games_per_combination > 0) per_combination = o.games_per_combination;

  std::vector<WinRateTable> tables;
  for (const auto& g : corpus) {
    if (g.parse_only) {
      err << "skipping parse-only game \"" << g.name << "\"\n";
      continue;
    }
    if (!o.games.empty() && std::find(o.games.begin(), o.games.end(), g.name) == o.games.end()) continue;
    const CandidatePool pool = build_pool(*g.spec);
    const MatchupSchedule schedule = build_schedule(pool, o.seed, per_combination);
    err << g.name << ": " << schedule.matches.size() << " matches\n";
    TournamentRecord record;
    record.table = run_tournament(*g.spec, pool, schedule, options);
    record.master_seed = o.seed;
    record.depth = o.depth;
    record.terminal_utility_scale = options.search.terminal_utility_scale;
    record.games_per_combination = per_combination;
    write_file(fs::path(o.output) / (file_stem(g.name) + ".json"), to_json(record));
    tables.push_back(std::move(record.table));
  }
  if (tables.empty()) throw Error(ErrorCode::DegenerateInput, "no playable games selected");
  const std::string comment = "tournament seed=" + std::to_string(o.seed) + " depth=" + std::to_string(o.depth) +
                              " games_per_combination=" +
                              (per_combination ? std::to_string(*per_combination) : std::string("auto")) +
                              " games=" + std::to_string(tables.size());
  write_file(fs::path(o.output) / "aggregate.csv", report_csv(aggregate_report(tables), comment));
  out << "wrote " << tables.size() << " game results and aggregate.csv to " << o.output << '\n';
  return kOk;
}

FeatureMatrix read_features(const std::string& path) {
  const LabeledDataset d = read_csv(read_file(path));
  return d.features;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  std::vector<Algorithm> algorithms;
  if (o.algorithms.empty()) {
    algorithms.assign(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
  } else {
    for (const auto& name : o.algorithms) {
      const auto a = algorithm_from_string(name);
      if (!a) throw Error(ErrorCode::Usage, "unknown algorithm '" + name + "'");
      algorithms.push_back(*a);
    }
  }
  if (std::find(algorithms.begin(), algorithms.end(), Algorithm::Naive) == algorithms.end())
    algorithms.push_back(Algorithm::Naive);

  const LabeledDataset data = join_labels(read_features(o.features), fs::path(o.results));
  const Hyperparameters hp;
  const EvalReport report = evaluate(data, algorithms, o.seed, hp, thread_count(o));
  for (const auto& row : report.rows) {
    if (row.regret < 0.0 || std::abs(row.expected_win_rate + row.regret - report.mean_best_win_rate) > 1e-9)
      throw std::logic_error("metric identity violated for " + std::string(to_string(row.algorithm)));
  }

  std::string algs;
  for (Algorithm a : algorithms) algs += (algs.empty() ? "" : ";") + std::string(to_string(a));
  const std::string comment =
      "evaluate seed=" + std::to_string(o.seed) + " algorithms=" + algs + " games=" +
      std::to_string(data.features.rows()) + " ridge_lambda=" + num(hp.ridge_lambda) + " lasso_lambda=" +
      num(hp.lasso_lambda) + " elastic_lambda=" + num(hp.elastic_lambda) + " elastic_l1_ratio=" +
      num(hp.elastic_l1_ratio) + " k=" + std::to_string(hp.neighbours) + " tree_min_leaf=" +
      std::to_string(hp.tree_min_leaf) + " forest_trees=" + std::to_string(hp.forest_trees) + " boosting_rounds=" +
      std::to_string(hp.boosting_rounds) + " boosting_depth=" + std::to_string(hp.boosting_depth) +
      " learning_rate=" + num(hp.learning_rate) + " mean_best_win_rate=" + num(report.mean_best_win_rate);
  const fs::path dir(o.output);
  write_file(dir / "dataset.csv", write_csv(data, "dataset seed=" + std::to_string(o.seed)));
  write_file(dir / "evaluation.csv", report_csv(report, comment));
  write_file(dir / "slot_mae.csv", slot_mae_csv(report, comment));
  out << "wrote dataset.csv, evaluation.csv and slot_mae.csv to " << o.output << '\n';
  return kOk;
}

int cmd_cluster(const Options& o, std::ostream& out) {
  const FeatureMatrix features = read_features(o.features);
  const std::size_t n = features.rows();
  if (n < 3) throw Error(ErrorCode::DegenerateInput, "clustering needs at least 3 games");
  TsneConfig config;
  config.seed = o.seed;
  config.iterations = o.iterations;
  config.learning_rate = o.learning_rate;
  config.perplexity = o.perplexity > 0.0 ? o.perplexity : std::min(30.0, static_cast<double>(n - 1) / 3.0);

  const Matrix p = affinities(to_matrix(features), config.perplexity);
  const Embedding embedding = tsne(p, config);
  const double eps = o.eps > 0.0 ? o.eps : default_eps(embedding.points);
  const auto labels = cluster_embedding(embedding.points, eps, o.min_points);
  const auto explanation = explain_clusters(features, labels, o.max_depth);

  const std::string comment = "cluster seed=" + std::to_string(o.seed) + " perplexity=" + num(config.perplexity) +
                              " iterations=" + std::to_string(config.iterations) + " learning_rate=" +
                              num(config.learning_rate) + " eps=" + num(eps) + " min_points=" +
                              std::to_string(o.min_points) + " max_depth=" + std::to_string(o.max_depth) +
                              " initial_kl=" + num(embedding.initial_kl) + " final_kl=" + num(embedding.final_kl);
  const fs::path dir(o.output);
  write_file(dir / "embedding.csv", embedding_csv(features.games, embedding, labels, comment));
  write_file(dir / "explanation.txt", explanation_text(explanation, comment));
  out << "wrote embedding.csv and explanation.txt to " << o.output << " (" << explanation.sizes.size()
      << " label groups, final KL " << embedding.final_kl << ")\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ludeme workbench: game descriptions, heuristic tournaments, regression and clustering"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Parse and compile every game in a corpus");
  validate->add_option("corpus", o.corpus, "Corpus directory")->required();

  auto* ludemes = app.add_subcommand("ludemes", "Write the games x ludemes feature matrix");
  ludemes->add_option("corpus", o.corpus, "Corpus directory")->required();
  ludemes->add_option("-o,--output", o.output, "Output CSV")->required();

  auto* tournament = app.add_subcommand("tournament", "Run heuristic tournaments for every playable game");
  tournament->add_option("corpus", o.corpus, "Corpus directory")->required();
  tournament->add_option("-o,--output", o.output, "Results directory")->required();
  tournament->add_option("--seed", o.seed, "Master seed");
  tournament->add_option("--depth", o.depth, "Search depth in plies")->check(CLI::PositiveNumber);
  tournament->add_option("--threads", o.threads, "Worker threads (default: hardware)");
  tournament->add_option("--games-per-combination", o.games_per_combination, "Override games per combination");
  tournament->add_option("--game", o.games, "Restrict to these game names");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Leave-one-out evaluation of the regression algorithms");
  evaluate_cmd->add_option("--features", o.features, "Feature CSV from `ludemes`")->required();
  evaluate_cmd->add_option("--results", o.results, "Tournament results directory")->required();
  evaluate_cmd->add_option("-o,--output", o.output, "Report directory")->required();
  evaluate_cmd->add_option("--seed", o.seed, "Master seed");
  evaluate_cmd->add_option("--algorithms", o.algorithms, "Subset of algorithms")->delimiter(',');
  evaluate_cmd->add_option("--threads", o.threads, "Worker threads (default: hardware)");

  auto* cluster = app.add_subcommand("cluster", "t-SNE embedding, density clustering and rule extraction");
  cluster->add_option("--features", o.features, "Feature CSV from `ludemes`")->required();
  cluster->add_option("-o,--output", o.output, "Output directory")->required();
  cluster->add_option("--seed", o.seed, "Seed");
  cluster->add_option("--perplexity", o.perplexity, "Perplexity (default: min(30, (games-1)/3))");
  cluster->add_option("--iterations", o.iterations, "Gradient steps")->check(CLI::PositiveNumber);
  cluster->add_option("--learning-rate", o.learning_rate, "Learning rate");
  cluster->add_option("--eps", o.eps, "Neighbourhood radius (default: 5% of the embedding diagonal)");
  cluster->add_option("--min-points", o.min_points, "Core point threshold");
  cluster->add_option("--max-depth", o.max_depth, "Explanation tree depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (ludemes->parsed()) return cmd_ludemes(o, out);
    if (tournament->parsed()) return cmd_tournament(o, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (cluster->parsed()) return cmd_cluster(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Usage ? kUsage : kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsage;
}

}  // namespace ludemic::cli
