#pragma once

#include <compare>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ludemic/board.hpp"
#include "ludemic/gdl.hpp"

namespace ludemic {

/// Players are numbered 1..n; index 0 of per-player tables is unused unless
/// noted otherwise.
using Player = int;

struct PieceType {
  std::string name;
  Player owner = 1;
  int value = 1;
};

/// A named site set. owner == 0 means the region belongs to nobody.
struct Region {
  std::string name;
  Player owner = 0;
  std::vector<int> sites;
};

enum class PlayRule { AddToEmpty, Step };

/// Step directions relative to the side a player faces. Odd players face
/// north (increasing row), even players face south.
enum class RelativeDirection : std::uint8_t { Forward, FR, Rightward, BR, Backward, BL, Leftward, FL };

enum class ResultKind { Win, Loss, Draw };
enum class LimitResolution { Score, Pieces, Draw };

struct EndRule {
  enum class Kind { LineOf, NoMoves, ReachRegion, TurnLimit };
  Kind kind = Kind::TurnLimit;
  int length = 0;                   // LineOf
  std::string region;               // ReachRegion
  int turns = 0;                    // TurnLimit
  ResultKind result = ResultKind::Draw;  // applied to the triggering player
  LimitResolution resolution = LimitResolution::Draw;  // TurnLimit
};

struct Placement {
  int piece = 0;
  std::vector<int> sites;
};

/// Precomputed per-site proximity weights in [0,1], 1 on the target set.
struct ProximityTables {
  std::vector<double> corner;
  std::vector<double> sides;
  std::vector<double> centre;
  std::vector<double> region;                       // empty when no unowned region
  std::vector<std::vector<double>> player_regions;  // [player], empty when none owned
};

inline constexpr int kDefaultTurnLimit = 150;

/// A compiled, immutable game. Safe to share between threads.
/// Line windows that advance by `step` sites, marked by their first site.
struct LineShift {
  int step = 0;
  std::array<std::uint64_t, 2> starts{};
};

struct GameSpec {
  std::string name;
  int players = 2;
  Board board;
  std::vector<PieceType> pieces;
  std::vector<Region> regions;
  /// site_maps[p] lists the sites mapped to player p.
  std::vector<std::vector<int>> site_maps;
  PlayRule play = PlayRule::AddToEmpty;
  std::vector<RelativeDirection> directions;
  bool capture_by_replacement = false;
  std::optional<int> points_per_capture;
  std::vector<EndRule> end_rules;
  std::optional<int> line_target;
  std::vector<Placement> start;

  // derived at compile time
  std::vector<std::vector<int>> line_windows;
  std::vector<int> window_sites;  // line_windows flattened, line_target sites each
  std::vector<LineShift> line_shifts;  // line_windows by step, for boards of at most 128 sites
  std::vector<std::vector<int>> windows_through;  // window indices per site
  std::vector<std::vector<std::vector<int>>> step_targets;  // [player][site]
  std::vector<int> first_piece;  // [player] piece placed by Add moves
  ProximityTables proximity;

  bool has_rule(EndRule::Kind kind) const;
  bool has_site_maps() const;
};

struct Cell {
  std::int8_t owner = 0;  // 0 = empty
  std::int8_t piece = -1;
  std::int16_t count = 0;

  bool empty() const { return owner == 0; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Immutable position snapshot; `apply` returns a new state.
struct GameState {
  std::vector<Cell> cells;
  Player mover = 1;
  std::vector<int> scores;  // scores[p - 1]
  int turn = 0;
  /// Destination of the move that produced this state, -1 if none. Line
  /// detection only examines lines through it when set.
  int last_to = -1;
  std::uint64_t history_hash = 0;

  int score(Player p) const { return scores[static_cast<std::size_t>(p - 1)]; }
  friend bool operator==(const GameState&, const GameState&) = default;
};

struct Move {
  enum class Kind : std::uint8_t { Add, Step, Pass };
  Kind kind = Kind::Pass;
  int from = -1;
  int to = -1;
  bool capture = false;

  friend bool operator==(const Move&, const Move&) = default;
};

std::string to_string(const Move& move);

struct Outcome {
  std::vector<double> utility;  // utility[p - 1]: +1 win, -1 loss, 0 draw
  std::optional<Player> winner;
};

GameSpec compile(const gdl::LudemeTree& tree);

GameState initial_state(const GameSpec& spec);

/// Moves produced by the play rule for `player` as if it were to move.
/// Sorted by (from, to). Never contains Pass.
std::vector<Move> rule_moves(const GameSpec& spec, const GameState& state, Player player);
bool has_rule_move(const GameSpec& spec, const GameState& state, Player player);

/// rule_moves for the mover, or a lone Pass when there are none.
std::vector<Move> legal_moves(const GameSpec& spec, const GameState& state);

/// Throws IllegalMove when `move` is not legal in `state`.
GameState apply(const GameSpec& spec, const GameState& state, const Move& move);

/// Evaluates end rules in order, then declares a draw when no player can
/// move. Empty while the game continues.
std::optional<Outcome> outcome(const GameSpec& spec, const GameState& state);

Player next_player(const GameSpec& spec, Player p);

}  // namespace ludemic
