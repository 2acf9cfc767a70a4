#include "ludemic/tournament.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <limits>
#include <set>

#include <json.hpp>

#include "ludemic/error.hpp"
#include "ludemic/seeding.hpp"

namespace ludemic {

const std::vector<HeuristicSpec>& portfolio_slots() {
  static const std::vector<HeuristicSpec> slots = [] {
    std::vector<HeuristicSpec> out;
    for (HeuristicKind k : kAllHeuristicKinds) {
      if (k == HeuristicKind::Null) continue;
      out.emplace_back(k, +1);
      out.emplace_back(k, -1);
    }
    out.emplace_back(HeuristicKind::Null, +1);
    return out;
  }();
  return slots;
}

int slot_index(const HeuristicSpec& slot) {
  const auto& slots = portfolio_slots();
  const auto it = std::find(slots.begin(), slots.end(), slot);
  return it == slots.end() ? -1 : static_cast<int>(it - slots.begin());
}

CandidatePool build_pool(const GameSpec& spec) {
  CandidatePool pool;
  pool.game = spec.name;
  pool.players = spec.players;
  for (const HeuristicSpec& slot : portfolio_slots()) {
    const HeuristicSpec resolved = applicable(slot.kind, spec) ? slot : HeuristicSpec{};
    pool.entries.push_back({slot, resolved});
  }
  return pool;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

namespace {

void enumerate(const std::vector<int>& items, int k, std::size_t start, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = start; i < items.size(); ++i) {
    current.push_back(items[i]);
    enumerate(items, k, i + 1, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> opponent_combinations(const std::vector<int>& others, int k, Rng& rng) {
  std::vector<std::vector<int>> out;
  if (binomial(static_cast<int>(others.size()), k) <= static_cast<std::uint64_t>(kMaxCombinations)) {
    std::vector<int> current;
    enumerate(others, k, 0, current, out);
    return out;
  }
  // Each draw is a uniform k-subset, so keeping the first ten distinct draws
  // samples ten combinations uniformly without replacement.
  std::set<std::vector<int>> chosen;
  std::vector<int> pool = others;
  while (static_cast<int>(chosen.size()) < kMaxCombinations) {
    for (int i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(i) + uniform_index(rng, pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<int> combo(pool.begin(), pool.begin() + k);
    std::sort(combo.begin(), combo.end());
    chosen.insert(std::move(combo));
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

MatchupSchedule build_schedule(const CandidatePool& pool, std::uint64_t master_seed,
                               std::optional<int> games_per_combination, const std::vector<int>& focus) {
  MatchupSchedule schedule;
  schedule.game = pool.game;
  schedule.players = pool.players;
  schedule.master_seed = master_seed;
  const std::uint64_t game_key = fnv1a(pool.game);
  const int k = pool.size();

  std::vector<int> focus_entries = focus;
  if (focus_entries.empty()) {
    for (int i = 0; i < k; ++i) focus_entries.push_back(i);
  }

  for (int f : focus_entries) {
    std::vector<int> others;
    for (int i = 0; i < k; ++i)
      if (i != f) others.push_back(i);
    Rng rng(derive_seed(master_seed, {game_key, static_cast<std::uint64_t>(f), 0xC0C0ULL}));

    FocusBlock block;
    block.focus = f;
    block.combinations = opponent_combinations(others, pool.players - 1, rng);
    const int count = static_cast<int>(block.combinations.size());
    const int needed = count == 0 ? 0 : (kMinGamesPerFocus + count - 1) / count;
    block.games_per_combination = std::max({kMinGamesPerCombination, needed, games_per_combination.value_or(0)});

    for (int c = 0; c < count; ++c) {
      std::vector<int> base{f};
      base.insert(base.end(), block.combinations[static_cast<std::size_t>(c)].begin(),
                  block.combinations[static_cast<std::size_t>(c)].end());
      const int n = static_cast<int>(base.size());
      for (int r = 0; r < block.games_per_combination; ++r) {
        ScheduledMatch match;
        match.focus = f;
        match.combination = c;
        match.repetition = r;
        match.seats.resize(static_cast<std::size_t>(n));
        // rotate so the focus sits in seat r mod n
        for (int s = 0; s < n; ++s) match.seats[static_cast<std::size_t>(s)] = base[static_cast<std::size_t>(((s - r) % n + n) % n)];
        match.seed = derive_seed(master_seed, {game_key, static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(c),
                                               static_cast<std::uint64_t>(r)});
        schedule.matches.push_back(std::move(match));
      }
    }
    schedule.blocks.push_back(std::move(block));
  }
  return schedule;
}

MatchResult run_match(const GameSpec& spec, const std::vector<HeuristicSpec>& seats, std::uint64_t seed,
                      const SearchConfig& config) {
  MatchResult result;
  const auto n = static_cast<std::size_t>(spec.players);
  try {
    if (seats.size() != n) throw Error(ErrorCode::Usage, "seat count does not match player count");
    Rng rng(seed);
    GameState state = initial_state(spec);
    std::optional<Outcome> done;
    while (!(done = outcome(spec, state))) {
      const HeuristicSpec& h = seats[static_cast<std::size_t>(state.mover - 1)];
      state = apply(spec, state, choose_move(spec, state, h, config, rng));
    }
    result.turns = state.turn;
    const double best = *std::max_element(done->utility.begin(), done->utility.end());
    const auto sharing = std::count(done->utility.begin(), done->utility.end(), best);
    result.credit.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (done->utility[i] == best) result.credit[i] = 1.0 / static_cast<double>(sharing);
  } catch (const std::exception& e) {
    result.completed = false;
    result.error = e.what();
    result.credit.assign(n, 0.0);
  }
  return result;
}

WinRateTable run_tournament(const GameSpec& spec, const CandidatePool& pool, const MatchupSchedule& schedule,
                            const TournamentOptions& options) {
  std::vector<MatchResult> results(schedule.matches.size());
  parallel_for(schedule.matches.size(), options.threads, [&](std::size_t i) {
    const ScheduledMatch& match = schedule.matches[i];
    std::vector<HeuristicSpec> seats;
    seats.reserve(match.seats.size());
    for (int e : match.seats) seats.push_back(pool.entries[static_cast<std::size_t>(e)].resolved);
    results[i] = run_match(spec, seats, match.seed, options.search);
  });

  WinRateTable table;
  table.game = pool.game;
  table.players = pool.players;
  for (const PoolEntry& e : pool.entries) table.entries.push_back({e, 0, 0.0});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const MatchResult& r = results[i];
    if (!r.completed) {
      ++table.failed_matches;
      std::cerr << "warning: " << pool.game << " match " << i << " excluded: " << r.error << '\n';
      continue;
    }
    ++table.completed_matches;
    const auto& seats = schedule.matches[i].seats;
    for (std::size_t s = 0; s < seats.size(); ++s) {
      WinRateEntry& entry = table.entries[static_cast<std::size_t>(seats[s])];
      ++entry.games_played;
      entry.win_credit += r.credit[s];
    }
  }
  return table;
}

std::vector<HeuristicReportRow> aggregate_report(const std::vector<WinRateTable>& tables) {
  const auto& slots = portfolio_slots();
  std::vector<HeuristicReportRow> rows;
  for (const HeuristicSpec& slot : slots) rows.push_back({slot, 0.0, 0});
  std::vector<int> games(slots.size(), 0);
  for (const WinRateTable& table : tables) {
    std::vector<double> rate(slots.size(), -1.0);
    for (const WinRateEntry& e : table.entries) {
      const int idx = slot_index(e.entry.slot);
      if (idx < 0 || e.games_played == 0) continue;
      rate[static_cast<std::size_t>(idx)] = e.win_rate();
      rows[static_cast<std::size_t>(idx)].avg_win_pct += 100.0 * e.win_rate();
      ++games[static_cast<std::size_t>(idx)];
    }
    const auto top = std::max_element(rate.begin(), rate.end());
    if (*top >= 0.0 && std::count(rate.begin(), rate.end(), *top) == 1) {
      ++rows[static_cast<std::size_t>(top - rate.begin())].top_count;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (games[i] > 0) rows[i].avg_win_pct /= games[i];
  return rows;
}

std::string report_csv(const std::vector<HeuristicReportRow>& rows, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "heuristic,sign,avg_win_pct,top_count\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.2f", row.avg_win_pct);
    out += std::string(to_string(row.slot.kind)) + "," + (row.slot.sign > 0 ? "+" : "-") + "," + buf + "," +
           std::to_string(row.top_count) + "\n";
  }
  return out;
}

std::string to_json(const TournamentRecord& record) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["game"] = record.table.game;
  doc["n"] = record.table.players;
  ordered_json entries = ordered_json::array();
  for (const WinRateEntry& e : record.table.entries) {
    ordered_json row;
    row["slot"] = std::string(to_string(e.entry.slot.kind));
    row["resolvedKind"] = std::string(to_string(e.entry.resolved.kind));
    row["sign"] = e.entry.slot.sign;
    row["gamesPlayed"] = e.games_played;
    row["winCredit"] = e.win_credit;
    row["winRate"] = e.win_rate();
    entries.push_back(std::move(row));
  }
  doc["entries"] = std::move(entries);
  doc["masterSeed"] = record.master_seed;
  ordered_json config;
  config["depth"] = record.depth;
  config["terminalUtilityScale"] = record.terminal_utility_scale;
  if (record.games_per_combination) {
    config["gamesPerCombination"] = *record.games_per_combination;
  } else {
    config["gamesPerCombination"] = "auto";
  }
  config["completedMatches"] = record.table.completed_matches;
  config["failedMatches"] = record.table.failed_matches;
  doc["config"] = std::move(config);
  return doc.dump(2) + "\n";
}

TournamentRecord record_from_json(const std::string& text) {
  TournamentRecord record;
  try {
    const auto doc = nlohmann::json::parse(text);
    record.table.game = doc.at("game").get<std::string>();
    record.table.players = doc.at("n").get<int>();
    record.master_seed = doc.at("masterSeed").get<std::uint64_t>();
    const auto& config = doc.at("config");
    record.depth = config.at("depth").get<int>();
    record.terminal_utility_scale = config.at("terminalUtilityScale").get<double>();
    if (config.at("gamesPerCombination").is_number()) record.games_per_combination = config["gamesPerCombination"].get<int>();
    record.table.completed_matches = config.value("completedMatches", 0);
    record.table.failed_matches = config.value("failedMatches", 0);
    for (const auto& row : doc.at("entries")) {
      const auto kind = heuristic_from_string(row.at("slot").get<std::string>());
      const auto resolved = heuristic_from_string(row.at("resolvedKind").get<std::string>());
      if (!kind || !resolved) throw Error(ErrorCode::MalformedResults, "unknown heuristic in results");
      const int sign = row.at("sign").get<int>();
      WinRateEntry e;
      e.entry.slot = HeuristicSpec(*kind, sign);
      e.entry.resolved = HeuristicSpec(*resolved, sign);
      e.games_played = row.at("gamesPlayed").get<int>();
      e.win_credit = row.at("winCredit").get<double>();
      record.table.entries.push_back(e);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedResults, std::string("bad results document: ") + e.what());
  }
  return record;
}

}  // namespace ludemic
