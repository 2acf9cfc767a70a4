#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "ludemic/engine.hpp"

namespace ludemic {

/// The heuristic portfolio in canonical order. The order is used for
/// deterministic tie-breaking everywhere downstream.
enum class HeuristicKind : std::uint8_t {
  Material,
  Mobility,
  Influence,
  CornerProximity,
  SidesProximity,
  LineCompletion,
  CentreProximity,
  RegionProximity,
  OwnRegionsCount,
  PlayerRegionsProximity,
  PlayerSiteMapCount,
  Score,
  ComponentValues,
  Null,
};

inline constexpr int kHeuristicKindCount = 14;

inline constexpr std::array<HeuristicKind, kHeuristicKindCount> kAllHeuristicKinds = {
    HeuristicKind::Material,        HeuristicKind::Mobility,
    HeuristicKind::Influence,       HeuristicKind::CornerProximity,
    HeuristicKind::SidesProximity,  HeuristicKind::LineCompletion,
    HeuristicKind::CentreProximity, HeuristicKind::RegionProximity,
    HeuristicKind::OwnRegionsCount, HeuristicKind::PlayerRegionsProximity,
    HeuristicKind::PlayerSiteMapCount, HeuristicKind::Score,
    HeuristicKind::ComponentValues, HeuristicKind::Null,
};

std::string_view to_string(HeuristicKind kind);
std::optional<HeuristicKind> heuristic_from_string(std::string_view name);

/// A heuristic with a positive (+1) or negative (-1) weight. Null is always
/// positive.
struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::Null;
  int sign = +1;

  HeuristicSpec() = default;
  HeuristicSpec(HeuristicKind k, int s);

  /// e.g. "Material+", "Null"
  std::string label() const;

  friend auto operator<=>(const HeuristicSpec&, const HeuristicSpec&) = default;
};

bool applicable(HeuristicKind kind, const GameSpec& spec);

/// Unnormalised per-player value of one heuristic. Throws NotApplicable.
double raw_value(HeuristicKind kind, const GameSpec& spec, const GameState& state, Player player);

/// sign * (raw(player) - mean over opponents of raw(opponent)).
double state_value(const HeuristicSpec& h, const GameSpec& spec, const GameState& state, Player player);

/// state_value for each heuristic, bitwise equal to separate calls. Cell-scan
/// kinds share one pass over the board.
std::vector<double> state_values(const std::vector<HeuristicSpec>& hs, const GameSpec& spec, const GameState& state,
                                 Player player);

}  // namespace ludemic
