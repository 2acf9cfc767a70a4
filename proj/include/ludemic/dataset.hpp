#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ludemic/gdl.hpp"
#include "ludemic/heuristics.hpp"
#include "ludemic/tournament.hpp"

namespace ludemic {

/// Binary games x ludemes presence matrix.
struct FeatureMatrix {
  std::vector<std::string> games;
  std::vector<std::string> vocabulary;  // sorted
  std::vector<std::vector<std::uint8_t>> x;  // x[game][ludeme]

  std::size_t rows() const { return games.size(); }
  std::size_t cols() const { return vocabulary.size(); }
  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

FeatureMatrix build_feature_matrix(const std::vector<std::pair<std::string, gdl::LudemeTree>>& corpus);

/// Features plus one win-rate label vector (percent, 2 decimals) per
/// portfolio slot.
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<HeuristicSpec> slots;
  std::vector<std::vector<double>> labels;  // labels[slot][game]

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

/// Win rate in [0,1] to a percentage rounded to two decimals.
double percent_label(double win_rate);

LabeledDataset join_labels(const FeatureMatrix& features, const std::vector<TournamentRecord>& records);

/// Reads `<results_dir>/<file_stem(game)>.json` for every game.
LabeledDataset join_labels(const FeatureMatrix& features, const std::filesystem::path& results_dir);

/// Header `game,<ludeme...>,label:<Kind>:<sign>...`; `comment` becomes a
/// leading `# ` line when non-empty.
std::string write_csv(const LabeledDataset& dataset, const std::string& comment = "");
std::string write_csv(const FeatureMatrix& features, const std::string& comment = "");

/// Inverse of write_csv; `#` lines are skipped. Feature-only files yield no
/// slots.
LabeledDataset read_csv(const std::string& text);

}  // namespace ludemic
