#include "ludemic/search.hpp"

#include <cmath>
#include <limits>

namespace ludemic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Eval>
class AlphaBeta {
 public:
  AlphaBeta(const GameSpec& spec, Player root, const Eval& eval, double scale, SearchStats* stats)
      : spec_(spec), root_(root), eval_(eval), scale_(scale), stats_(stats) {}

  // Fail-soft: a result r <= alpha means value <= r, r >= beta means value >= r,
  // anything in between is exact.
  double value(const GameState& state, int depth, double alpha, double beta) const {
    if (stats_) ++stats_->nodes;
    if (const auto result = outcome(spec_, state)) {
      return result->utility[static_cast<std::size_t>(root_ - 1)] * scale_;
    }
    if (depth == 0) return eval_(state, root_);
    const auto moves = legal_moves(spec_, state);
    if (state.mover == root_) {
      double best = -kInf;
      for (const Move& m : moves) {
        best = std::max(best, value(apply(spec_, state, m), depth - 1, alpha, beta));
        alpha = std::max(alpha, best);
        if (alpha >= beta) break;
      }
      return best;
    }
    double best = kInf;
    for (const Move& m : moves) {
      best = std::min(best, value(apply(spec_, state, m), depth - 1, alpha, beta));
      beta = std::min(beta, best);
      if (alpha >= beta) break;
    }
    return best;
  }

 private:
  const GameSpec& spec_;
  Player root_;
  const Eval& eval_;
  double scale_;
  SearchStats* stats_;
};

template <class Eval>
double minimax(const GameSpec& spec, const GameState& state, const Eval& eval, int depth, Player root, double scale,
               SearchStats* stats) {
  if (stats) ++stats->nodes;
  if (const auto result = outcome(spec, state)) return result->utility[static_cast<std::size_t>(root - 1)] * scale;
  if (depth == 0) return eval(state, root);
  const bool maximise = state.mover == root;
  double best = maximise ? -kInf : kInf;
  for (const Move& m : legal_moves(spec, state)) {
    const double v = minimax(spec, apply(spec, state, m), eval, depth - 1, root, scale, stats);
    best = maximise ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

template <class Eval>
Move choose(const GameSpec& spec, const GameState& state, const Eval& eval, const SearchConfig& config, Rng& rng) {
  const auto moves = legal_moves(spec, state);
  const AlphaBeta<Eval> search(spec, state.mover, eval, config.terminal_utility_scale, nullptr);
  std::vector<std::size_t> best_moves;
  double best = -kInf;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    // Searching just below the incumbent keeps ties exact while still
    // pruning moves that are strictly worse.
    const double floor = best == -kInf ? -kInf : std::nextafter(best, -kInf);
    const double v = search.value(apply(spec, state, moves[i]), config.depth - 1, floor, kInf);
    if (v > best) {
      best = v;
      best_moves.assign(1, i);
    } else if (v == best) {
      best_moves.push_back(i);
    }
  }
  return moves[best_moves[uniform_index(rng, best_moves.size())]];
}

struct HeuristicEval {
  const GameSpec& spec;
  const HeuristicSpec& h;
  double operator()(const GameState& state, Player p) const { return state_value(h, spec, state, p); }
};

}  // namespace

double alphabeta(const GameSpec& spec, const GameState& state, const HeuristicSpec& h, int depth, Player player,
                 const SearchConfig& config, SearchStats* stats) {
  const HeuristicEval eval{spec, h};
  return AlphaBeta<HeuristicEval>(spec, player, eval, config.terminal_utility_scale, stats)
      .value(state, depth, -kInf, kInf);
}

double minimax_oracle(const GameSpec& spec, const GameState& state, const HeuristicSpec& h, int depth, Player player,
                      const SearchConfig& config, SearchStats* stats) {
  const HeuristicEval eval{spec, h};
  return minimax(spec, state, eval, depth, player, config.terminal_utility_scale, stats);
}

Move choose_move(const GameSpec& spec, const GameState& state, const HeuristicSpec& h, const SearchConfig& config,
                 Rng& rng) {
  const HeuristicEval eval{spec, h};
  return choose(spec, state, eval, config, rng);
}

Move choose_move(const GameSpec& spec, const GameState& state, const LeafEvaluator& evaluate,
                 const SearchConfig& config, Rng& rng) {
  return choose(spec, state, evaluate, config, rng);
}

}  // namespace ludemic
