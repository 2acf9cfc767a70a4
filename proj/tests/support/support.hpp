#pragma once

// Shared helpers for the unit tests and the acceptance runner: corpus access,
// seeded random states and brute-force oracles that do not touch the search
// module.

#include <cstdint>
#include <string>
#include <vector>

#include "ludemic/engine.hpp"
#include "ludemic/heuristics.hpp"
#include "ludemic/matrix.hpp"
#include "ludemic/regress.hpp"
#include "ludemic/seeding.hpp"

namespace support {

std::string corpus_dir();
std::string parse_only_dir();
std::string cli_path();

struct LoadedGame {
  std::string file;
  std::string name;
  std::string text;
  ludemic::GameSpec spec;
};

/// Every compiled game of the shipped corpus, manifest order.
std::vector<LoadedGame> corpus_games();
const LoadedGame& corpus_game(const std::string& name);

/// States reached by uniform random play for a uniform random number of
/// plies; terminal states are kept.
std::vector<ludemic::GameState> random_states(const ludemic::GameSpec& spec, std::size_t count, std::uint64_t seed);

/// Plain minimax for many heuristics at once. Returns values[d - 1][h] for
/// every truncation depth d in 1..max_depth.
std::vector<std::vector<double>> oracle_values(const ludemic::GameSpec& spec, const ludemic::GameState& state,
                                               const std::vector<ludemic::HeuristicSpec>& heuristics, int max_depth,
                                               ludemic::Player root, double terminal_scale);

/// Tic-Tac-Toe solved on a bare 9-cell array: positions reachable from the
/// empty board (stopping at wins and full boards) and the game-theoretic
/// value for the first player (+1, 0, -1).
struct TicTacToeFacts {
  int reachable = 0;
  int value = 0;
};
TicTacToeFacts tic_tac_toe_facts();

/// Standard normal entries, or 0/1 entries when `binary`.
ludemic::Matrix random_matrix(std::size_t rows, std::size_t cols, ludemic::Rng& rng, bool binary);

/// Least squares with intercept via the normal equations, solved by Gaussian
/// elimination with partial pivoting. Returns {intercept, coef...}.
std::vector<double> normal_equations(const ludemic::Matrix& x, const std::vector<double>& y);

/// Largest violation of the optimality conditions of
/// (1/2n)|r|^2 + lambda*l1*|w|_1 + lambda*(1-l1)/2*|w|^2.
double kkt_residual(const ludemic::Matrix& x, const std::vector<double>& y, const ludemic::LinearModel& m, double lambda,
                    double l1);

/// 50 + 20 * x[feature] + N(0, 3^2) per row.
std::vector<double> planted_labels(const ludemic::Matrix& x, std::size_t feature, ludemic::Rng& rng);

/// Runs `cmd` through the shell; returns the exit status.
int shell(const std::string& cmd);

}  // namespace support
