// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ludemic/cluster.hpp"
#include "ludemic/corpus.hpp"
#include "ludemic/dataset.hpp"
#include "ludemic/engine.hpp"
#include "ludemic/evaluation.hpp"
#include "ludemic/gdl.hpp"
#include "ludemic/heuristics.hpp"
#include "ludemic/regress.hpp"
#include "ludemic/search.hpp"
#include "ludemic/seeding.hpp"
#include "ludemic/tournament.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace ludemic;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

int worker_threads() { return std::max(4, static_cast<int>(std::thread::hardware_concurrency())); }

std::vector<fs::path> gdl_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".gdl") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// 1. parse -> pretty_print -> parse is the identity; the listing has the documented shape.
Verdict parser_round_trip() {
  int files = 0;
  int failures = 0;
  for (const fs::path& dir : {fs::path(support::corpus_dir()), fs::path(support::parse_only_dir())})
    for (const fs::path& file : gdl_files(dir)) {
      ++files;
      const gdl::LudemeTree tree = gdl::parse(read_file(file));
      const std::string printed = gdl::pretty_print(tree);
      if (!(gdl::parse(printed) == tree) || gdl::pretty_print(gdl::parse(printed)) != printed) ++failures;
    }
  const gdl::LudemeTree ttt = gdl::parse(R"((game "Tic-Tac-Toe"
    (players 2)
    (equipment {
        (board (square 3))
        (piece "Disc" P1)
        (piece "Cross" P2)
    })
    (rules
        (play (move Add (to (sites Empty))))
        (end (if (is Line 3) (result Mover Win)))
    )
))");
  using gdl::NodeKind;
  const auto& c = ttt.children;
  const bool shape = ttt.kind == NodeKind::Compound && ttt.text == "game" && c.size() == 4 &&
                     c[0].kind == NodeKind::String && c[0].text == "Tic-Tac-Toe" && c[1].text == "players" &&
                     c[1].children.size() == 1 && c[1].children[0].kind == NodeKind::Number &&
                     c[1].children[0].number == 2.0 && c[2].text == "equipment" && c[2].children.size() == 1 &&
                     c[2].children[0].kind == NodeKind::List && c[2].children[0].children.size() == 3 &&
                     c[2].children[0].children[0].text == "board" && c[2].children[0].children[1].text == "piece" &&
                     c[3].text == "rules" && c[3].children.size() == 2 && c[3].children[0].text == "play" &&
                     c[3].children[1].text == "end" && c[3].children[0].children[0].text == "move" &&
                     c[3].children[0].children[0].children[0].kind == NodeKind::Keyword &&
                     c[3].children[0].children[0].children[0].text == "Add";
  return {failures == 0 && files > 0 && shape,
          std::to_string(files) + " files, " + std::to_string(failures) + " mismatches, listing " +
              (shape ? "ok" : "wrong")};
}

std::string owners_key(const GameState& s) {
  std::string k;
  for (const Cell& c : s.cells) k += static_cast<char>('0' + c.owner);
  return k;
}

// Perfect-play value for player 1 through the engine's own move generator.
int engine_value(const GameSpec& spec, const GameState& s, std::map<std::string, int>& memo) {
  const std::string key = owners_key(s) + static_cast<char>('0' + s.mover);
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  int value = 0;
  if (const auto result = outcome(spec, s)) {
    value = result->utility[0] > 0 ? 1 : result->utility[0] < 0 ? -1 : 0;
  } else {
    value = s.mover == 1 ? -2 : 2;
    for (const Move& m : legal_moves(spec, s)) {
      const int v = engine_value(spec, apply(spec, s, m), memo);
      value = s.mover == 1 ? std::max(value, v) : std::min(value, v);
    }
  }
  memo.emplace(key, value);
  return value;
}

// 2. Exhaustive Tic-Tac-Toe against the bare-array oracle.
Verdict engine_oracle() {
  const GameSpec& ttt = support::corpus_game("Tic-Tac-Toe").spec;
  std::set<std::string> seen;
  std::vector<GameState> stack{initial_state(ttt)};
  while (!stack.empty()) {
    const GameState s = stack.back();
    stack.pop_back();
    if (!seen.insert(owners_key(s)).second) continue;
    if (outcome(ttt, s)) continue;
    for (const Move& m : legal_moves(ttt, s)) stack.push_back(apply(ttt, s, m));
  }
  std::map<std::string, int> memo;
  const int value = engine_value(ttt, initial_state(ttt), memo);
  const auto facts = support::tic_tac_toe_facts();
  const bool ok = seen.size() == 5478 && facts.reachable == 5478 && value == 0 && facts.value == 0;
  return {ok, "engine reachable " + std::to_string(seen.size()) + ", oracle reachable " +
                  std::to_string(facts.reachable) + ", engine value " + std::to_string(value) + ", oracle value " +
                  std::to_string(facts.value)};
}

// 3. Alpha-beta equals plain minimax for every pool entry at depths 1..3.
Verdict search_oracle() {
  long compared = 0;
  long mismatches = 0;
  std::string worst;
  for (const auto& g : support::corpus_games()) {
    const CandidatePool pool = build_pool(g.spec);
    std::vector<HeuristicSpec> entries;
    for (const PoolEntry& e : pool.entries) entries.push_back(e.resolved);
    // alpha-beta is a pure function of its arguments, so identical resolved
    // entries share one search
    std::vector<HeuristicSpec> distinct;
    std::vector<std::size_t> index;
    for (const HeuristicSpec& h : entries) {
      auto it = std::find(distinct.begin(), distinct.end(), h);
      if (it == distinct.end()) it = distinct.insert(distinct.end(), h);
      index.push_back(static_cast<std::size_t>(it - distinct.begin()));
    }
    const SearchConfig config;
    for (const GameState& s : support::random_states(g.spec, 1000, 3)) {
      const auto oracle = support::oracle_values(g.spec, s, entries, 3, s.mover, config.terminal_utility_scale);
      for (int d = 1; d <= 3; ++d) {
        std::vector<double> ab(distinct.size());
        for (std::size_t h = 0; h < distinct.size(); ++h) ab[h] = alphabeta(g.spec, s, distinct[h], d, s.mover, config);
        for (std::size_t e = 0; e < entries.size(); ++e) {
          ++compared;
          if (ab[index[e]] != oracle[static_cast<std::size_t>(d - 1)][e]) {
            ++mismatches;
            worst = g.name;
          }
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(compared) + " values compared, " + std::to_string(mismatches) +
                               " mismatches" + (worst.empty() ? "" : " (last in " + worst + ")")};
}

// 4. Heuristic identities on random states.
Verdict heuristic_identities() {
  long checks = 0;
  long failures = 0;
  for (const auto& g : support::corpus_games()) {
    const GameSpec& spec = g.spec;
    for (const GameState& s : support::random_states(spec, 10000, 4)) {
      for (Player p = 1; p <= spec.players; ++p) {
        ++checks;
        if (raw_value(HeuristicKind::Influence, spec, s, p) > raw_value(HeuristicKind::Mobility, spec, s, p)) ++failures;
        ++checks;
        if (state_value(HeuristicSpec(HeuristicKind::Null, 1), spec, s, p) != 0.0 ||
            state_value(HeuristicSpec(HeuristicKind::Null, -1), spec, s, p) != 0.0)
          ++failures;
      }
      for (HeuristicKind k : kAllHeuristicKinds) {
        if (!applicable(k, spec)) continue;
        const HeuristicSpec plus(k, 1);
        const HeuristicSpec minus(k, -1);
        for (Player p = 1; p <= spec.players; ++p) {
          ++checks;
          if (state_value(minus, spec, s, p) != -state_value(plus, spec, s, p)) ++failures;
        }
        if (spec.players == 2) {
          ++checks;
          if (state_value(plus, spec, s, 1) != -state_value(plus, spec, s, 2)) ++failures;
        }
      }
    }
  }
  return {failures == 0, std::to_string(checks) + " checks, " + std::to_string(failures) + " failures"};
}

// 5. Schedule shape for the two-player games and the three-player game.
Verdict schedule_shape() {
  int games = 0;
  int failures = 0;
  bool three = false;
  for (const auto& g : support::corpus_games()) {
    ++games;
    const CandidatePool pool = build_pool(g.spec);
    const MatchupSchedule s = build_schedule(pool, 42);
    const auto expected = static_cast<std::size_t>(
        std::min<std::uint64_t>(binomial(kPortfolioSize - 1, g.spec.players - 1), 10));
    if (g.spec.players == 2 && expected != 10) ++failures;
    if (g.spec.players == 3) three = true;
    std::map<int, int> per_focus;
    for (const auto& m : s.matches) ++per_focus[m.focus];
    if (s.blocks.size() != kPortfolioSize) ++failures;
    for (const FocusBlock& b : s.blocks) {
      const std::set<std::vector<int>> distinct(b.combinations.begin(), b.combinations.end());
      if (b.combinations.size() != expected || distinct.size() != expected) ++failures;
      if (b.games_per_combination < 10 || per_focus[b.focus] < 100) ++failures;
      for (const auto& c : b.combinations)
        if (c.size() != static_cast<std::size_t>(g.spec.players - 1) ||
            std::find(c.begin(), c.end(), b.focus) != c.end())
          ++failures;
    }
  }
  return {failures == 0 && three, std::to_string(games) + " games, " + std::to_string(failures) + " violations" +
                                      (three ? "" : ", no three-player game")};
}

// 6. Material+ beats Material- on the rigged game.
Verdict rigged_game() {
  const GameSpec& spec = support::corpus_game("MaterialRules").spec;
  const CandidatePool pool = build_pool(spec);
  const int plus = slot_index(HeuristicSpec(HeuristicKind::Material, 1));
  const int minus = slot_index(HeuristicSpec(HeuristicKind::Material, -1));
  const MatchupSchedule schedule = build_schedule(pool, 42, 25, {plus, minus});
  TournamentOptions options;
  options.threads = worker_threads();
  const WinRateTable t = run_tournament(spec, pool, schedule, options);
  const double wp = t.entries[static_cast<std::size_t>(plus)].win_rate();
  const double wm = t.entries[static_cast<std::size_t>(minus)].win_rate();
  const bool ok = schedule.matches.size() == 500 && t.failed_matches == 0 && wp >= 0.75 && wm <= 0.35;
  return {ok, std::to_string(schedule.matches.size()) + " matches, Material+ " + fmt("%.3f", wp) + ", Material- " +
                  fmt("%.3f", wm)};
}

// 7. Regret identities on random matrices.
Verdict metric_identities() {
  double worst = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t games = 1 + uniform_index(rng, 100);
    SlotMatrix truth(kPortfolioSize, std::vector<double>(games));
    SlotMatrix pred(kPortfolioSize, std::vector<double>(games));
    for (std::size_t s = 0; s < kPortfolioSize; ++s)
      for (std::size_t g = 0; g < games; ++g) {
        truth[s][g] = percent_label(uniform_unit(rng));
        pred[s][g] = seed % 2 ? std::round(100.0 * uniform_unit(rng)) : 100.0 * uniform_unit(rng);
      }
    const double r = regret(pred, truth);
    const double gap = std::abs(expected_win_rate(pred, truth) + r - mean_best_win_rate(truth));
    worst = std::max(worst, gap);
    if (r < 0.0 || gap > 1e-10 || regret(truth, truth) != 0.0) ok = false;
  }
  return {ok, "200 instances, worst identity gap " + fmt("%.2e", worst)};
}

// 8. Regression oracles.
Verdict regression_oracles() {
  double ridge_gap = 0.0;
  double kkt = 0.0;
  int tree_mismatches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Matrix x = support::random_matrix(30, 10, rng, false);
    std::vector<double> y(30);
    for (double& v : y) v = 50.0 + 10.0 * standard_normal(rng);
    Hyperparameters hp;
    hp.ridge_lambda = 1e-9;
    const RegressionModel ridge = fit(Algorithm::Ridge, x, y, 0, hp);
    const auto& lin = std::get<LinearModel>(ridge.fitted());
    const auto oracle = support::normal_equations(x, y);
    ridge_gap = std::max(ridge_gap, std::abs(lin.intercept - oracle[0]));
    for (std::size_t j = 0; j < 10; ++j) ridge_gap = std::max(ridge_gap, std::abs(lin.coef[j] - oracle[j + 1]));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 1000);
    const Matrix x = support::random_matrix(40, 12, rng, seed % 2 == 0);
    const auto y = support::planted_labels(x, seed % 12, rng);
    const Hyperparameters hp;
    const RegressionModel lasso = fit(Algorithm::Lasso, x, y, 0, hp);
    kkt = std::max(kkt, support::kkt_residual(x, y, std::get<LinearModel>(lasso.fitted()), hp.lasso_lambda, 1.0));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 2000);
    const Matrix x = support::random_matrix(60, 15, rng, true);
    const auto y = support::planted_labels(x, seed % 15, rng);
    Hyperparameters hp;
    hp.forest_trees = 1;
    hp.forest_bootstrap = false;
    hp.forest_max_features = 15;
    const RegressionModel forest = fit(Algorithm::RandomForest, x, y, seed, hp);
    const RegressionModel tree = fit(Algorithm::DecisionTree, x, y, seed, hp);
    bool same = std::get<ForestModel>(forest.fitted()).trees.size() == 1 &&
                std::get<ForestModel>(forest.fitted()).trees.front() == std::get<RegressionTree>(tree.fitted());
    for (std::size_t i = 0; i < x.rows(); ++i) same = same && forest.predict(x.row(i)) == tree.predict(x.row(i));
    if (!same) ++tree_mismatches;
  }
  const bool ok = ridge_gap < 1e-4 && kkt <= 1e-4 && tree_mismatches == 0;
  return {ok, "Ridge max gap " + fmt("%.2e", ridge_gap) + ", Lasso KKT " + fmt("%.2e", kkt) + ", forest/tree mismatches " +
                  std::to_string(tree_mismatches)};
}

// 9. Planted signal: each slot's label depends on its own feature.
Verdict planted_signal() {
  int mae_wins = 0;
  int regret_wins = 0;
  const std::vector<Algorithm> algorithms(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(9, {seed}));
    const Matrix x = support::random_matrix(100, 40, rng, true);
    LabeledDataset d;
    for (std::size_t j = 0; j < 40; ++j) d.features.vocabulary.push_back("l" + std::string(j < 10 ? "0" : "") + std::to_string(j));
    for (std::size_t i = 0; i < 100; ++i) {
      d.features.games.push_back("g" + std::to_string(i));
      d.features.x.emplace_back();
      for (std::size_t j = 0; j < 40; ++j) d.features.x.back().push_back(static_cast<std::uint8_t>(x(i, j)));
    }
    d.slots = {HeuristicSpec(HeuristicKind::Material, 1), HeuristicSpec(HeuristicKind::Mobility, 1),
               HeuristicSpec(HeuristicKind::LineCompletion, 1)};
    std::vector<std::size_t> features(40);
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t s = 0; s < d.slots.size(); ++s) {
      std::swap(features[s], features[s + uniform_index(rng, 40 - s)]);
      d.labels.push_back(support::planted_labels(x, features[s], rng));
    }
    const EvalReport report = evaluate(d, algorithms, seed, {}, worker_threads());
    const auto row = [&](Algorithm a) -> const AlgorithmReport& {
      return *std::find_if(report.rows.begin(), report.rows.end(),
                           [&](const AlgorithmReport& r) { return r.algorithm == a; });
    };
    const AlgorithmReport& naive = row(Algorithm::Naive);
    bool all_better = true;
    for (Algorithm a : algorithms)
      if (a != Algorithm::Naive && !(row(a).mae_mean < naive.mae_mean)) all_better = false;
    mae_wins += all_better;
    regret_wins += row(Algorithm::RandomForest).regret <= naive.regret;
  }
  return {mae_wins >= 18 && regret_wins >= 18, "every learner beats Naive MAE in " + std::to_string(mae_wins) +
                                                   "/20 seeds, RandomForest regret <= Naive in " +
                                                   std::to_string(regret_wins) + "/20"};
}

// 10. Naive leave-one-out prediction is the mean of the other labels.
Verdict naive_closed_form() {
  long checked = 0;
  long failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + uniform_index(rng, 100);
    std::vector<double> y(n);
    for (double& v : y) v = 100.0 * uniform_unit(rng);
    const auto pred = loocv(Algorithm::Naive, Matrix(n, 4), y, seed);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) total += y[j];
      ++checked;
      if (pred[i] != total / static_cast<double>(n - 1)) ++failures;
    }
  }
  return {failures == 0, std::to_string(checked) + " predictions, " + std::to_string(failures) + " differ"};
}

// 11. t-SNE gradient, descent on the corpus, planted structures.
Verdict tsne_checks() {
  std::string detail;
  bool ok = true;

  double worst_gradient = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Matrix p = affinities(support::random_matrix(10, 5, rng, false), 3.0);
    Matrix y = support::random_matrix(10, 2, rng, false);
    const Matrix g = kl_gradient(p, y);
    double diff = 0.0;
    double norm = 0.0;
    const double h = 1e-6;
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t k = 0; k < 2; ++k) {
        const double keep = y(i, k);
        y(i, k) = keep + h;
        const double up = kl_divergence(p, y);
        y(i, k) = keep - h;
        const double down = kl_divergence(p, y);
        y(i, k) = keep;
        const double fd = (up - down) / (2.0 * h);
        diff += (fd - g(i, k)) * (fd - g(i, k));
        norm += g(i, k) * g(i, k);
      }
    worst_gradient = std::max(worst_gradient, std::sqrt(diff / norm));
  }
  ok = ok && worst_gradient <= 1e-5;
  detail += "gradient rel. error " + fmt("%.1e", worst_gradient);

  std::vector<std::pair<std::string, gdl::LudemeTree>> corpus;
  for (const auto& g : support::corpus_games()) corpus.emplace_back(g.name, gdl::parse(g.text));
  const FeatureMatrix features = build_feature_matrix(corpus);
  const double n = static_cast<double>(features.rows());
  const Matrix p = affinities(to_matrix(features), std::min(30.0, (n - 1.0) / 3.0));
  int decreased = 0;
  const int runs = 20;
  for (int seed = 0; seed < runs; ++seed) {
    TsneConfig config;
    config.perplexity = std::min(30.0, (n - 1.0) / 3.0);
    config.seed = static_cast<std::uint64_t>(seed == runs - 1 ? 42 : seed);
    const Embedding e = tsne(p, config);
    decreased += e.final_kl < e.initial_kl;
  }
  ok = ok && decreased == runs;
  detail += ", corpus KL decreased in " + std::to_string(decreased) + "/" + std::to_string(runs) + " runs";

  // two blocks of 50 games that share no ludemes
  Rng rng(11);
  FeatureMatrix blocks;
  for (int j = 0; j < 40; ++j) blocks.vocabulary.push_back((j < 10 ? "l0" : "l") + std::to_string(j));
  for (int g = 0; g < 100; ++g) {
    blocks.games.push_back("g" + std::to_string(g));
    std::vector<std::uint8_t> row(40, 0);
    const int base = g < 50 ? 0 : 20;
    for (int j = 0; j < 20; ++j) row[static_cast<std::size_t>(base + j)] = uniform_index(rng, 2) ? 1 : 0;
    row[static_cast<std::size_t>(base)] = 1;
    blocks.x.push_back(row);
  }
  TsneConfig config;
  config.seed = 42;
  const Embedding e = tsne(affinities(to_matrix(blocks), 30.0), config);
  double c[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t k = 0; k < 2; ++k) c[i / 50][k] += e.points(i, k) / 50.0;
  double spread = 0.0;
  for (std::size_t i = 0; i < 100; ++i)
    spread += std::hypot(e.points(i, 0) - c[i / 50][0], e.points(i, 1) - c[i / 50][1]) / 100.0;
  const double between = std::hypot(c[0][0] - c[1][0], c[0][1] - c[1][1]);
  ok = ok && between > 3.0 * spread;
  detail += ", blocks " + fmt("%.1f", between / spread) + "x spread";

  // cluster membership planted on `sow`
  Rng planted(7);
  FeatureMatrix sow;
  sow.vocabulary = {"board", "dice", "line", "piece", "sow", "track"};
  std::vector<int> labels;
  for (int g = 0; g < 60; ++g) {
    sow.games.push_back("g" + std::to_string(g));
    std::vector<std::uint8_t> row(sow.vocabulary.size());
    for (auto& v : row) v = uniform_index(planted, 2) ? 1 : 0;
    labels.push_back(row[4] ? 0 : 1);
    sow.x.push_back(row);
  }
  const ClusterExplanation x = explain_clusters(sow, labels);
  const bool root = x.accuracy == 1.0 && x.depth == 1 && !x.rules.empty() &&
                    x.rules[0].conditions.size() == 1 && x.rules[0].conditions[0].first == "sow";
  ok = ok && root;
  detail += root ? ", sow root split" : ", sow root split missing";
  return {ok, detail};
}

int sh(const std::string& cmd) { return support::shell(cmd); }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::map<std::string, std::string> tree_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "log.txt") out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return out;
}

// 12. The whole pipeline twice at full thread count and once single-threaded.
Verdict end_to_end() {
  const fs::path root = fs::temp_directory_path() / "ludemic_acceptance";
  fs::remove_all(root);
  const std::string cli = q(support::cli_path());
  const std::string corpus = q(support::corpus_dir());
  const int threads = worker_threads();
  const std::vector<int> runs{threads, threads, 1};
  std::vector<std::map<std::string, std::string>> outputs;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const fs::path dir = root / ("run" + std::to_string(r));
    fs::create_directories(dir);
    const std::string t = " --threads " + std::to_string(runs[r]);
    const std::string log = " >>" + q(dir / "log.txt") + " 2>&1";
    const bool ok = sh(cli + " validate " + corpus + log) == 0 &&
                    sh(cli + " tournament " + corpus + " --seed 42" + t + " --output " + q(dir / "results") + log) == 0 &&
                    sh(cli + " ludemes " + corpus + " --output " + q(dir / "features.csv") + log) == 0 &&
                    sh(cli + " evaluate --features " + q(dir / "features.csv") + " --results " + q(dir / "results") +
                       " --seed 42" + t + " --output " + q(dir / "report") + log) == 0 &&
                    sh(cli + " cluster --features " + q(dir / "features.csv") + " --seed 42 --output " +
                       q(dir / "cluster") + log) == 0;
    if (!ok) return {false, "run " + std::to_string(r) + " failed, see " + (dir / "log.txt").string()};
    outputs.push_back(tree_contents(dir));
  }
  const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {same && !outputs[0].empty(), std::to_string(outputs[0].size()) + " output files, threads " +
                                           std::to_string(threads) + "/" + std::to_string(threads) + "/1 " +
                                           (same ? "identical" : "differ")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select criteria by number
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "parser round-trip", 1, parser_round_trip},
      {2, "engine oracle", 10, engine_oracle},
      {3, "search oracle", 300, search_oracle},
      {4, "heuristic identities", 60, heuristic_identities},
      {5, "tournament protocol shape", 60, schedule_shape},
      {6, "rigged-game signal", 600, rigged_game},
      {7, "metric identities", 60, metric_identities},
      {8, "regression oracles", 60, regression_oracles},
      {9, "planted-signal learning", 600, planted_signal},
      {10, "naive closed form", 60, naive_closed_form},
      {11, "t-SNE checks", 300, tsne_checks},
      {12, "end-to-end determinism", 1800, end_to_end},
  };
  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s; %.1f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), seconds,
                c.budget_seconds, in_time ? "" : " over time");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", ran - failed, static_cast<std::size_t>(ran));
  return failed == 0 ? 0 : 1;
}
