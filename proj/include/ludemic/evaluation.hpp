#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ludemic/dataset.hpp"
#include "ludemic/regress.hpp"

namespace ludemic {

/// Per-slot series indexed [slot][game].
using SlotMatrix = std::vector<std::vector<double>>;

double mae(std::span<const double> predictions, std::span<const double> labels);

/// Slot with the highest prediction for `game`; ties go to the lowest slot
/// index, which follows canonical heuristic order with + before -.
std::size_t chosen_slot(const SlotMatrix& predictions, std::size_t game);

/// Mean over games of the true win-rate of the predicted-best slot.
double expected_win_rate(const SlotMatrix& predictions, const SlotMatrix& truth);

/// Mean over games of w(h*) - w(chosen).
double regret(const SlotMatrix& predictions, const SlotMatrix& truth);

/// Mean over games of the best true win-rate.
double mean_best_win_rate(const SlotMatrix& truth);

struct AlgorithmReport {
  Algorithm algorithm = Algorithm::Naive;
  std::vector<double> mae_per_slot;
  double mae_mean = 0.0;
  double mae_stdev = 0.0;  // population standard deviation over slots
  double expected_win_rate = 0.0;
  double regret = 0.0;
  SlotMatrix predictions;
};

struct EvalReport {
  std::vector<HeuristicSpec> slots;
  std::vector<AlgorithmReport> rows;
  double mean_best_win_rate = 0.0;
};

/// LOOCV for every algorithm and slot. Fold seeds derive from
/// (seed, algorithm, slot).
EvalReport evaluate(const LabeledDataset& data, std::span<const Algorithm> algorithms, std::uint64_t seed,
                    const Hyperparameters& params = {}, int threads = 1);

/// `algorithm,mae_mean,mae_stdev,expected_win_rate,regret`
std::string report_csv(const EvalReport& report, const std::string& comment = "");
/// `algorithm,<slot labels...>`
std::string slot_mae_csv(const EvalReport& report, const std::string& comment = "");

Matrix to_matrix(const FeatureMatrix& features);

}  // namespace ludemic
