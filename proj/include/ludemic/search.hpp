#pragma once

#include <cstdint>
#include <functional>

#include "ludemic/engine.hpp"
#include "ludemic/heuristics.hpp"
#include "ludemic/seeding.hpp"

namespace ludemic {

struct SearchConfig {
  int depth = 2;
  /// Multiplies terminal utilities; must dominate every heuristic value.
  double terminal_utility_scale = 1e6;
};

struct SearchStats {
  std::uint64_t nodes = 0;
};

/// Leaf evaluation from `player`'s point of view.
using LeafEvaluator = std::function<double(const GameState&, Player)>;

/// Depth-limited alpha-beta value of `state` for `player`. With more than two
/// players every opponent minimises the root player's value (paranoid).
double alphabeta(const GameSpec& spec, const GameState& state, const HeuristicSpec& h, int depth, Player player,
                 const SearchConfig& config = {}, SearchStats* stats = nullptr);

/// Plain minimax with identical leaf evaluation and no pruning. Test oracle.
double minimax_oracle(const GameSpec& spec, const GameState& state, const HeuristicSpec& h, int depth, Player player,
                      const SearchConfig& config = {}, SearchStats* stats = nullptr);

/// A move with maximal root value for the mover; ties are broken uniformly
/// at random with `rng`.
Move choose_move(const GameSpec& spec, const GameState& state, const HeuristicSpec& h, const SearchConfig& config,
                 Rng& rng);

Move choose_move(const GameSpec& spec, const GameState& state, const LeafEvaluator& evaluate,
                 const SearchConfig& config, Rng& rng);

}  // namespace ludemic
