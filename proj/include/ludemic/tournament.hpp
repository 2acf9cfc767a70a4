#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ludemic/engine.hpp"
#include "ludemic/heuristics.hpp"
#include "ludemic/search.hpp"

namespace ludemic {

/// 13 kinds x 2 signs, then Null: 27 portfolio slots in canonical order.
inline constexpr int kPortfolioSize = 27;
const std::vector<HeuristicSpec>& portfolio_slots();
int slot_index(const HeuristicSpec& slot);

struct PoolEntry {
  HeuristicSpec slot;      // label used in reports
  HeuristicSpec resolved;  // what actually plays; Null when slot is inapplicable
};

struct CandidatePool {
  std::string game;
  int players = 2;
  std::vector<PoolEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }
};

CandidatePool build_pool(const GameSpec& spec);

inline constexpr int kMaxCombinations = 10;
inline constexpr int kMinGamesPerCombination = 10;
inline constexpr int kMinGamesPerFocus = 100;

struct ScheduledMatch {
  std::vector<int> seats;  // pool entry index per seat
  std::uint64_t seed = 0;
  int focus = 0;
  int combination = 0;
  int repetition = 0;
};

struct FocusBlock {
  int focus = 0;
  std::vector<std::vector<int>> combinations;  // sorted entry indices
  int games_per_combination = 0;
};

struct MatchupSchedule {
  std::string game;
  int players = 2;
  std::uint64_t master_seed = 0;
  std::vector<FocusBlock> blocks;
  std::vector<ScheduledMatch> matches;
};

/// Number of k-subsets of n items, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// For each focus entry: all C(k-1, n-1) opponent combinations when there are
/// at most 10, otherwise 10 sampled without replacement; each combination is
/// played max(10, ceil(100 / |combinations|)) times (or `games_per_combination`
/// when larger) with the focus rotating through every seat.
/// `focus` restricts the schedule to the given entries (all when empty).
MatchupSchedule build_schedule(const CandidatePool& pool, std::uint64_t master_seed,
                               std::optional<int> games_per_combination = std::nullopt,
                               const std::vector<int>& focus = {});

struct MatchResult {
  std::vector<double> credit;  // per seat, sums to 1
  int turns = 0;
  bool completed = true;
  std::string error;
};

/// Plays one game between the seated heuristics. An exclusive winner takes
/// credit 1; otherwise the players sharing the best utility split it.
MatchResult run_match(const GameSpec& spec, const std::vector<HeuristicSpec>& seats, std::uint64_t seed,
                      const SearchConfig& config = {});

struct WinRateEntry {
  PoolEntry entry;
  int games_played = 0;
  double win_credit = 0.0;

  double win_rate() const { return games_played == 0 ? 0.0 : win_credit / games_played; }
};

struct WinRateTable {
  std::string game;
  int players = 2;
  std::vector<WinRateEntry> entries;  // pool order
  int completed_matches = 0;
  int failed_matches = 0;
};

struct TournamentOptions {
  SearchConfig search;
  int threads = 1;
};

/// Plays every scheduled match and credits each seat's entry. Results do not
/// depend on thread count or completion order.
WinRateTable run_tournament(const GameSpec& spec, const CandidatePool& pool, const MatchupSchedule& schedule,
                            const TournamentOptions& options = {});

struct HeuristicReportRow {
  HeuristicSpec slot;
  double avg_win_pct = 0.0;
  int top_count = 0;
};

/// Unweighted per-slot mean win percentage over games, and the number of
/// games where the slot is the sole top performer. Tables are keyed by slot.
std::vector<HeuristicReportRow> aggregate_report(const std::vector<WinRateTable>& tables);

/// `heuristic,sign,avg_win_pct,top_count`, one row per slot.
std::string report_csv(const std::vector<HeuristicReportRow>& rows, const std::string& comment);

struct TournamentRecord {
  WinRateTable table;
  std::uint64_t master_seed = 0;
  int depth = 2;
  double terminal_utility_scale = 1e6;
  std::optional<int> games_per_combination;
};

std::string to_json(const TournamentRecord& record);
TournamentRecord record_from_json(const std::string& text);

}  // namespace ludemic
