#include "ludemic/heuristics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "ludemic/error.hpp"

namespace ludemic {

std::string_view to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::Material: return "Material";
    case HeuristicKind::Mobility: return "Mobility";
    case HeuristicKind::Influence: return "Influence";
    case HeuristicKind::CornerProximity: return "CornerProximity";
    case HeuristicKind::SidesProximity: return "SidesProximity";
    case HeuristicKind::LineCompletion: return "LineCompletion";
    case HeuristicKind::CentreProximity: return "CentreProximity";
    case HeuristicKind::RegionProximity: return "RegionProximity";
    case HeuristicKind::OwnRegionsCount: return "OwnRegionsCount";
    case HeuristicKind::PlayerRegionsProximity: return "PlayerRegionsProximity";
    case HeuristicKind::PlayerSiteMapCount: return "PlayerSiteMapCount";
    case HeuristicKind::Score: return "Score";
    case HeuristicKind::ComponentValues: return "ComponentValues";
    case HeuristicKind::Null: return "Null";
  }
  return "?";
}

std::optional<HeuristicKind> heuristic_from_string(std::string_view name) {
  for (HeuristicKind k : kAllHeuristicKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

HeuristicSpec::HeuristicSpec(HeuristicKind k, int s) : kind(k), sign(k == HeuristicKind::Null ? +1 : (s < 0 ? -1 : +1)) {}

std::string HeuristicSpec::label() const {
  std::string out(to_string(kind));
  if (kind != HeuristicKind::Null) out += sign > 0 ? "+" : "-";
  return out;
}

bool applicable(HeuristicKind kind, const GameSpec& spec) {
  switch (kind) {
    case HeuristicKind::Material:
    case HeuristicKind::Mobility:
    case HeuristicKind::Influence:
    case HeuristicKind::CornerProximity:
    case HeuristicKind::SidesProximity:
    case HeuristicKind::CentreProximity:
    case HeuristicKind::Null:
      return true;
    case HeuristicKind::LineCompletion:
      return spec.has_rule(EndRule::Kind::LineOf);
    case HeuristicKind::Score:
      return spec.points_per_capture.has_value();
    case HeuristicKind::RegionProximity:
      return std::any_of(spec.regions.begin(), spec.regions.end(), [](const Region& r) { return r.owner == 0; });
    case HeuristicKind::OwnRegionsCount:
    case HeuristicKind::PlayerRegionsProximity:
      return std::any_of(spec.regions.begin(), spec.regions.end(), [](const Region& r) { return r.owner != 0; });
    case HeuristicKind::PlayerSiteMapCount:
      return spec.has_site_maps();
    case HeuristicKind::ComponentValues:
      return std::any_of(spec.pieces.begin(), spec.pieces.end(), [](const PieceType& p) { return p.value != 1; });
  }
  return false;
}

namespace {

double weighted_pieces(const std::vector<double>& weight, const GameState& state, Player player) {
  if (weight.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < state.cells.size(); ++s) {
    const Cell& c = state.cells[s];
    if (c.owner == player) total += weight[s] * c.count;
  }
  return total;
}

using Totals = std::array<double, 9>;  // per owner; players never exceed 8

// Line potential for every player in one pass; totals[p] for p in 1..players.
// A window counts for its sole occupant, weighted by the squared fill ratio.
// Squared counts are summed as integers so the order of windows does not matter.

using Bits = unsigned __int128;

long popcount128(Bits x) {
  return std::popcount(static_cast<std::uint64_t>(x)) + std::popcount(static_cast<std::uint64_t>(x >> 64));
}

// Sum of squared own counts over the windows at `starts` holding none of
// `others`. Bit s of (x >> k*step) is site s + k*step, so a window's sites line
// up on its start bit. Counts are kept bit-sliced in Planes bitboards.
template <std::size_t Planes>
long sliced_squares(Bits own, Bits others, Bits starts, int step, std::size_t length) {
  Bits clear = starts;
  std::array<Bits, Planes> planes{};
  for (std::size_t k = 0; k < length; ++k) {
    const std::size_t shift = k * static_cast<std::size_t>(step);
    clear &= ~(others >> shift);
    Bits carry = own >> shift;
    for (std::size_t j = 0; j < Planes; ++j) {
      const Bits next = planes[j] & carry;
      planes[j] ^= carry;
      carry = next;
    }
  }
  // count^2 = sum over plane pairs (a, b) of 2^(a+b) * bit_a * bit_b
  long sum = 0;
  for (std::size_t a = 0; a < Planes; ++a) {
    const Bits pa = planes[a] & clear;
    sum += popcount128(pa) << (2 * a);
    for (std::size_t b = a + 1; b < Planes; ++b) sum += popcount128(pa & planes[b]) << (a + b + 1);
  }
  return sum;
}

long shifted_squares(Bits own, Bits others, Bits starts, int step, std::size_t length) {
  switch (std::bit_width(length)) {
    case 2: return sliced_squares<2>(own, others, starts, step, length);
    case 3: return sliced_squares<3>(own, others, starts, step, length);
    case 4: return sliced_squares<4>(own, others, starts, step, length);
    case 5: return sliced_squares<5>(own, others, starts, step, length);
    case 6: return sliced_squares<6>(own, others, starts, step, length);
    default: return sliced_squares<7>(own, others, starts, step, length);
  }
}

void line_completion(const GameSpec& spec, const GameState& state, Totals& totals) {
  const auto length = static_cast<std::size_t>(*spec.line_target);
  const auto players = static_cast<std::size_t>(spec.players);
  std::array<long, 9> squares{};
  if (!spec.line_shifts.empty()) {
    std::array<std::uint64_t, 9> low{}, high{};
    const std::size_t sites = state.cells.size();
    for (std::size_t s = 0; s < std::min<std::size_t>(sites, 64); ++s)
      low[static_cast<std::size_t>(state.cells[s].owner)] |= std::uint64_t{1} << s;
    for (std::size_t s = 64; s < sites; ++s) high[static_cast<std::size_t>(state.cells[s].owner)] |= std::uint64_t{1} << (s - 64);
    std::array<Bits, 9> owned{};
    Bits occupied = 0;
    for (std::size_t p = 1; p <= players; ++p) {
      owned[p] = (Bits{high[p]} << 64) | low[p];
      occupied |= owned[p];
    }
    for (const LineShift& dir : spec.line_shifts) {
      const Bits starts = (Bits{dir.starts[1]} << 64) | dir.starts[0];
      for (std::size_t p = 1; p <= players; ++p)
        if (owned[p] != 0) squares[p] += shifted_squares(owned[p], occupied & ~owned[p], starts, dir.step, length);
    }
  } else {
    // one bit per owner, 0 for an empty site
    std::vector<unsigned> bit(state.cells.size());
    for (std::size_t s = 0; s < bit.size(); ++s) bit[s] = (1u << state.cells[s].owner) & ~1u;
    const int* site = spec.window_sites.data();
    const int* end = site + spec.window_sites.size();
    for (; site != end; site += length) {
      unsigned owners = 0;
      long filled = 0;
      for (std::size_t k = 0; k < length; ++k) {
        const unsigned b = bit[static_cast<std::size_t>(site[k])];
        owners |= b;
        filled += b != 0;
      }
      if (owners != 0 && (owners & (owners - 1)) == 0)
        squares[static_cast<std::size_t>(std::countr_zero(owners))] += filled * filled;
    }
  }
  const double scale = static_cast<double>(length) * static_cast<double>(length);
  for (std::size_t p = 0; p <= players; ++p) totals[p] = static_cast<double>(squares[p]) / scale;
}

int empty_sites(const GameState& state) {
  return static_cast<int>(std::count_if(state.cells.begin(), state.cells.end(), [](const Cell& c) { return c.empty(); }));
}

int mobility(const GameSpec& spec, const GameState& state, Player player) {
  const int moves = spec.play == PlayRule::AddToEmpty ? empty_sites(state)
                                                      : static_cast<int>(rule_moves(spec, state, player).size());
  if (moves > 0) return moves;
  // a lone Pass, unless running out of moves ends the game
  return spec.has_rule(EndRule::Kind::NoMoves) ? 0 : 1;
}

int influence(const GameSpec& spec, const GameState& state, Player player) {
  if (spec.play == PlayRule::AddToEmpty) return empty_sites(state);
  std::vector<char> reached(state.cells.size(), 0);
  int distinct = 0;
  for (const Move& m : rule_moves(spec, state, player)) {
    char& r = reached[static_cast<std::size_t>(m.to)];
    distinct += r == 0;
    r = 1;
  }
  return distinct;
}

double counts_on(const std::vector<int>& sites, const GameState& state) {
  double total = 0.0;
  for (int s : sites) total += state.cells[static_cast<std::size_t>(s)].count;
  return total;
}

double raw_unchecked(HeuristicKind kind, const GameSpec& spec, const GameState& state, Player player);

}  // namespace

double raw_value(HeuristicKind kind, const GameSpec& spec, const GameState& state, Player player) {
  if (!applicable(kind, spec)) {
    throw Error(ErrorCode::NotApplicable, std::string(to_string(kind)) + " in " + spec.name);
  }
  return raw_unchecked(kind, spec, state, player);
}

namespace {

double raw_unchecked(HeuristicKind kind, const GameSpec& spec, const GameState& state, Player player) {
  const ProximityTables& prox = spec.proximity;
  switch (kind) {
    case HeuristicKind::Material: {
      double total = 0.0;
      for (const Cell& c : state.cells)
        if (c.owner == player) total += c.count;
      return total;
    }
    case HeuristicKind::Mobility:
      return mobility(spec, state, player);
    case HeuristicKind::Influence:
      return influence(spec, state, player);
    case HeuristicKind::CornerProximity:
      return weighted_pieces(prox.corner, state, player);
    case HeuristicKind::SidesProximity:
      return weighted_pieces(prox.sides, state, player);
    case HeuristicKind::CentreProximity:
      return weighted_pieces(prox.centre, state, player);
    case HeuristicKind::RegionProximity:
      return weighted_pieces(prox.region, state, player);
    case HeuristicKind::PlayerRegionsProximity:
      return weighted_pieces(prox.player_regions[static_cast<std::size_t>(player)], state, player);
    case HeuristicKind::LineCompletion: {
      Totals totals{};
      line_completion(spec, state, totals);
      return totals[static_cast<std::size_t>(player)];
    }
    case HeuristicKind::OwnRegionsCount: {
      std::vector<int> sites;
      for (const Region& r : spec.regions)
        if (r.owner == player) sites.insert(sites.end(), r.sites.begin(), r.sites.end());
      std::sort(sites.begin(), sites.end());
      sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
      return counts_on(sites, state);
    }
    case HeuristicKind::PlayerSiteMapCount:
      return counts_on(spec.site_maps[static_cast<std::size_t>(player)], state);
    case HeuristicKind::Score:
      return state.score(player);
    case HeuristicKind::ComponentValues: {
      double total = 0.0;
      for (const Cell& c : state.cells)
        if (c.owner == player) total += static_cast<double>(spec.pieces[static_cast<std::size_t>(c.piece)].value) * c.count;
      return total;
    }
    case HeuristicKind::Null:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

namespace {

double relative(int sign, const Totals& totals, int players, Player player) {
  const double own = totals[static_cast<std::size_t>(player)];
  double others = 0.0;
  for (Player q = 1; q <= players; ++q)
    if (q != player) others += totals[static_cast<std::size_t>(q)];
  return sign * (own - others / (players - 1));
}

}  // namespace

double state_value(const HeuristicSpec& h, const GameSpec& spec, const GameState& state, Player player) {
  if (h.kind == HeuristicKind::Null) return 0.0;
  if (!applicable(h.kind, spec)) {
    throw Error(ErrorCode::NotApplicable, std::string(to_string(h.kind)) + " in " + spec.name);
  }
  const auto players = static_cast<std::size_t>(spec.players);
  Totals totals{};
  const ProximityTables& prox = spec.proximity;
  // cell-scan heuristics fill every player's total in one pass, in site order;
  // empty cells have count 0 and land in the unused slot 0
  const auto scan = [&](const auto& weight) {
    for (std::size_t s = 0; s < state.cells.size(); ++s) {
      const Cell& c = state.cells[s];
      totals[static_cast<std::size_t>(c.owner)] += weight(s, c) * c.count;
    }
  };
  const auto table = [&](const std::vector<double>& w) {
    if (!w.empty()) scan([&](std::size_t s, const Cell&) { return w[s]; });
  };
  switch (h.kind) {
    case HeuristicKind::Material:
      scan([](std::size_t, const Cell&) { return 1.0; });
      break;
    case HeuristicKind::CornerProximity:
      table(prox.corner);
      break;
    case HeuristicKind::SidesProximity:
      table(prox.sides);
      break;
    case HeuristicKind::CentreProximity:
      table(prox.centre);
      break;
    case HeuristicKind::RegionProximity:
      table(prox.region);
      break;
    case HeuristicKind::ComponentValues:
      scan([&](std::size_t, const Cell& c) {
        return c.owner == 0 ? 0.0 : static_cast<double>(spec.pieces[static_cast<std::size_t>(c.piece)].value);
      });
      break;
    case HeuristicKind::LineCompletion:
      line_completion(spec, state, totals);
      break;
    case HeuristicKind::Mobility:
    case HeuristicKind::Influence:
      if (spec.play == PlayRule::AddToEmpty) {
        // every player may fill any empty site, so both count the empty sites
        const int empty = empty_sites(state);
        if (empty > 0) {
          for (std::size_t q = 1; q <= players; ++q) totals[q] = empty;
          break;
        }
      }
      [[fallthrough]];
    default:
      for (Player q = 1; q <= spec.players; ++q) totals[static_cast<std::size_t>(q)] = raw_unchecked(h.kind, spec, state, q);
  }
  return relative(h.sign, totals, spec.players, player);
}

std::vector<double> state_values(const std::vector<HeuristicSpec>& hs, const GameSpec& spec, const GameState& state,
                                 Player player) {
  std::vector<double> out(hs.size());
  const ProximityTables& prox = spec.proximity;
  const bool fuse = !prox.corner.empty() && !prox.sides.empty() && !prox.centre.empty();
  Totals material{}, corner{}, sides{}, centre{};
  bool scanned = false;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const HeuristicKind k = hs[i].kind;
    const bool table_kind = k == HeuristicKind::Material || k == HeuristicKind::CornerProximity ||
                            k == HeuristicKind::SidesProximity || k == HeuristicKind::CentreProximity;
    if (!fuse || !table_kind) {
      out[i] = state_value(hs[i], spec, state, player);
      continue;
    }
    if (!scanned) {
      // same per-total addition order as state_value, so the sums are identical
      for (std::size_t s = 0; s < state.cells.size(); ++s) {
        const Cell& c = state.cells[s];
        const auto o = static_cast<std::size_t>(c.owner);
        material[o] += 1.0 * c.count;
        corner[o] += prox.corner[s] * c.count;
        sides[o] += prox.sides[s] * c.count;
        centre[o] += prox.centre[s] * c.count;
      }
      scanned = true;
    }
    const Totals& t = k == HeuristicKind::Material          ? material
                      : k == HeuristicKind::CornerProximity ? corner
                      : k == HeuristicKind::SidesProximity  ? sides
                                                            : centre;
    out[i] = relative(hs[i].sign, t, spec.players, player);
  }
  return out;
}

}  // namespace ludemic
