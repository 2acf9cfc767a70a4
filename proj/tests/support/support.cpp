#include "support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ludemic/corpus.hpp"
#include "ludemic/seeding.hpp"

using namespace ludemic;

namespace support {

std::string corpus_dir() { return LUDEMIC_CORPUS_DIR; }
std::string parse_only_dir() { return LUDEMIC_PARSE_ONLY_DIR; }
std::string cli_path() { return LUDEMIC_CLI_PATH; }

std::vector<LoadedGame> corpus_games() {
  static const std::vector<LoadedGame> games = [] {
    std::vector<LoadedGame> out;
    for (const auto& g : load_corpus(corpus_dir())) {
      if (!g.spec) continue;
      out.push_back({g.file, g.name, read_file(std::string(corpus_dir()) + "/" + g.file), *g.spec});
    }
    return out;
  }();
  return games;
}

const LoadedGame& corpus_game(const std::string& name) {
  static const auto games = corpus_games();
  for (const auto& g : games)
    if (g.name == name) return g;
  throw std::runtime_error("no corpus game " + name);
}

std::vector<GameState> random_states(const GameSpec& spec, std::size_t count, std::uint64_t seed) {
  int limit = kDefaultTurnLimit;
  for (const auto& r : spec.end_rules)
    if (r.kind == EndRule::Kind::TurnLimit) limit = std::min(limit, r.turns);
  std::vector<GameState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {i}));
    const auto plies = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(limit) + 1));
    GameState s = initial_state(spec);
    while (s.turn < plies && !outcome(spec, s)) {
      const auto moves = legal_moves(spec, s);
      s = apply(spec, s, moves[uniform_index(rng, moves.size())]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

struct Oracle {
  const GameSpec& spec;
  const std::vector<HeuristicSpec>& heuristics;
  std::vector<std::size_t> first;  // index of the first identical heuristic
  std::vector<bool> negated;       // value is the negation of heuristics[first]
  std::vector<HeuristicSpec> unique;  // heuristics[j] with first[j] == j, in order
  int max_depth;
  Player root;
  double scale;
  std::vector<std::vector<double>> scratch;  // one result buffer per ply
  // Row k of scratch[ply] holds the value under truncation depth k, for k in [ply, max_depth].
  void visit(const GameState& state, int ply) {
    const std::size_t h = heuristics.size();
    std::vector<double>& out = scratch[static_cast<std::size_t>(ply)];
    auto at = [&](int k, std::size_t j) -> double& { return out[static_cast<std::size_t>(k) * h + j]; };
    if (const auto result = outcome(spec, state)) {
      const double v = result->utility[static_cast<std::size_t>(root - 1)] * scale;
      for (int k = ply; k <= max_depth; ++k)
        for (std::size_t j = 0; j < h; ++j) at(k, j) = v;
      return;
    }
    if (ply >= 1) {
      const std::vector<double> values = state_values(unique, spec, state, root);
      for (std::size_t j = 0, u = 0; j < h; ++j)
        at(ply, j) = first[j] == j ? values[u++] : negated[j] ? -at(ply, first[j]) : at(ply, first[j]);
    }
    if (ply == max_depth) return;
    const bool maximise = state.mover == root;
    const std::vector<double>& child = scratch[static_cast<std::size_t>(ply + 1)];
    bool seen = false;
    for (const Move& m : legal_moves(spec, state)) {
      visit(apply(spec, state, m), ply + 1);
      for (int k = ply + 1; k <= max_depth; ++k)
        for (std::size_t j = 0; j < h; ++j) {
          const double v = child[static_cast<std::size_t>(k) * h + j];
          double& cur = at(k, j);
          if (!seen) cur = v;
          else cur = maximise ? std::max(cur, v) : std::min(cur, v);
        }
      seen = true;
    }
  }
};

}  // namespace

std::vector<std::vector<double>> oracle_values(const GameSpec& spec, const GameState& state,
                                               const std::vector<HeuristicSpec>& heuristics, int max_depth,
                                               Player root, double terminal_scale) {
  Oracle o{spec, heuristics, {}, {}, {}, max_depth, root, terminal_scale, {}};
  o.scratch.assign(static_cast<std::size_t>(max_depth + 1),
                   std::vector<double>(static_cast<std::size_t>(max_depth + 1) * heuristics.size(), 0.0));
  for (std::size_t j = 0; j < heuristics.size(); ++j) {
    // an opposite sign flips the value exactly, so it can reuse the earlier one
    std::size_t f = j;
    bool flip = false;
    for (std::size_t i = 0; i < j; ++i)
      if (heuristics[i].kind == heuristics[j].kind && o.first[i] == i) {
        f = i;
        flip = heuristics[i].sign != heuristics[j].sign;
        break;
      }
    o.first.push_back(f);
    o.negated.push_back(flip);
    if (f == j) o.unique.push_back(heuristics[j]);
  }
  o.visit(state, 0);
  const std::vector<double>& flat = o.scratch[0];
  std::vector<std::vector<double>> out;
  for (int d = 1; d <= max_depth; ++d)
    out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(d * heuristics.size()),
                     flat.begin() + static_cast<std::ptrdiff_t>((d + 1) * heuristics.size()));
  return out;
}

namespace {

int ttt_winner(const std::array<int, 9>& b) {
  static const int lines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  for (const auto& l : lines)
    if (b[l[0]] != 0 && b[l[0]] == b[l[1]] && b[l[1]] == b[l[2]]) return b[l[0]];
  return 0;
}

int ttt_code(const std::array<int, 9>& b) {
  int c = 0;
  for (int v : b) c = c * 3 + v;
  return c;
}

// Value for player 1 with `who` to move; every reachable position is recorded.
int ttt_solve(std::array<int, 9>& b, int who, std::map<int, int>& memo) {
  const int code = ttt_code(b);
  if (const auto it = memo.find(code); it != memo.end()) return it->second;
  int value = 0;
  const int w = ttt_winner(b);
  const bool full = std::all_of(b.begin(), b.end(), [](int v) { return v != 0; });
  if (w != 0) {
    value = w == 1 ? 1 : -1;
  } else if (!full) {
    value = who == 1 ? -2 : 2;
    for (int i = 0; i < 9; ++i) {
      if (b[i] != 0) continue;
      b[i] = who;
      const int v = ttt_solve(b, 3 - who, memo);
      b[i] = 0;
      value = who == 1 ? std::max(value, v) : std::min(value, v);
    }
  }
  memo[code] = value;
  return value;
}

}  // namespace

TicTacToeFacts tic_tac_toe_facts() {
  std::array<int, 9> board{};
  std::map<int, int> memo;
  TicTacToeFacts f;
  f.value = ttt_solve(board, 1, memo);
  f.reachable = static_cast<int>(memo.size());
  return f;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, bool binary) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = binary ? static_cast<double>(uniform_index(rng, 2)) : standard_normal(rng);
  return m;
}

std::vector<double> normal_equations(const Matrix& x, const std::vector<double>& y) {
  const std::size_t p = x.cols() + 1;
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::vector<double> z{1.0};
    for (std::size_t j = 0; j < x.cols(); ++j) z.push_back(x(i, j));
    for (std::size_t r = 0; r < p; ++r) {
      for (std::size_t c = 0; c < p; ++c) a[r][c] += z[r] * z[c];
      a[r][p] += z[r] * y[i];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    std::swap(a[c], a[pivot]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> out(p);
  for (std::size_t r = 0; r < p; ++r) out[r] = a[r][p] / a[r][r];
  return out;
}

double kkt_residual(const Matrix& x, const std::vector<double>& y, const LinearModel& m, double lambda, double l1) {
  const std::size_t n = x.rows();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = y[i] - m.intercept;
    for (std::size_t j = 0; j < x.cols(); ++j) r[i] -= m.coef[j] * x(i, j);
  }
  double worst = std::abs(std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n));
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) g += x(i, j) * r[i];
    g = g / static_cast<double>(n) - lambda * (1.0 - l1) * m.coef[j];
    const double bound = lambda * l1;
    const double w = m.coef[j];
    const double v = w > 0 ? std::abs(g - bound) : w < 0 ? std::abs(g + bound) : std::max(0.0, std::abs(g) - bound);
    worst = std::max(worst, v);
  }
  return worst;
}

std::vector<double> planted_labels(const Matrix& x, std::size_t feature, Rng& rng) {
  std::vector<double> y(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) y[i] = 50.0 + 20.0 * x(i, feature) + 3.0 * standard_normal(rng);
  return y;
}

}  // namespace support
