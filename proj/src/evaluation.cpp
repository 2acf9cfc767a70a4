#include "ludemic/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ludemic/error.hpp"
#include "ludemic/seeding.hpp"

namespace ludemic {

double mae(std::span<const double> predictions, std::span<const double> labels) {
  if (predictions.size() != labels.size()) throw Error(ErrorCode::DegenerateInput, "mae on unequal lengths");
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) sum += std::abs(predictions[i] - labels[i]);
  return sum / static_cast<double>(labels.size());
}

std::size_t chosen_slot(const SlotMatrix& predictions, std::size_t game) {
  std::size_t best = 0;
  for (std::size_t s = 1; s < predictions.size(); ++s)
    if (predictions[s][game] > predictions[best][game]) best = s;
  return best;
}

namespace {

std::size_t games_of(const SlotMatrix& m) { return m.empty() ? 0 : m.front().size(); }

double best_of(const SlotMatrix& truth, std::size_t game) {
  double best = truth.front()[game];
  for (const auto& slot : truth) best = std::max(best, slot[game]);
  return best;
}

void check_shapes(const SlotMatrix& predictions, const SlotMatrix& truth) {
  if (predictions.size() != truth.size() || predictions.empty())
    throw Error(ErrorCode::DegenerateInput, "prediction and truth slot counts differ");
  for (std::size_t s = 0; s < truth.size(); ++s)
    if (predictions[s].size() != truth[s].size() || truth[s].size() != games_of(truth))
      throw Error(ErrorCode::DegenerateInput, "ragged slot matrix");
}

}  // namespace

double expected_win_rate(const SlotMatrix& predictions, const SlotMatrix& truth) {
  check_shapes(predictions, truth);
  const std::size_t games = games_of(truth);
  if (games == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t g = 0; g < games; ++g) sum += truth[chosen_slot(predictions, g)][g];
  return sum / static_cast<double>(games);
}

double regret(const SlotMatrix& predictions, const SlotMatrix& truth) {
  check_shapes(predictions, truth);
  const std::size_t games = games_of(truth);
  if (games == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t g = 0; g < games; ++g) sum += best_of(truth, g) - truth[chosen_slot(predictions, g)][g];
  return sum / static_cast<double>(games);
}

double mean_best_win_rate(const SlotMatrix& truth) {
  const std::size_t games = games_of(truth);
  if (games == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t g = 0; g < games; ++g) sum += best_of(truth, g);
  return sum / static_cast<double>(games);
}

Matrix to_matrix(const FeatureMatrix& features) {
  Matrix m(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t j = 0; j < features.cols(); ++j) m(i, j) = features.x[i][j];
  return m;
}

EvalReport evaluate(const LabeledDataset& data, std::span<const Algorithm> algorithms, std::uint64_t seed,
                    const Hyperparameters& params, int threads) {
  if (data.features.rows() < 2) throw Error(ErrorCode::DegenerateInput, "evaluation needs at least two games");
  const Matrix x = to_matrix(data.features);
  const std::size_t slots = data.slots.size();
  EvalReport report;
  report.slots = data.slots;
  report.mean_best_win_rate = mean_best_win_rate(data.labels);
  report.rows.resize(algorithms.size());
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    report.rows[a].algorithm = algorithms[a];
    report.rows[a].predictions.resize(slots);
  }
  parallel_for(algorithms.size() * slots, threads, [&](std::size_t job) {
    const std::size_t a = job / slots;
    const std::size_t s = job % slots;
    const auto alg_seed = derive_seed(seed, {static_cast<std::uint64_t>(algorithms[a]), s});
    report.rows[a].predictions[s] = loocv(algorithms[a], x, data.labels[s], alg_seed, params, 1);
  });
  for (auto& row : report.rows) {
    row.mae_per_slot.resize(slots);
    for (std::size_t s = 0; s < slots; ++s) row.mae_per_slot[s] = mae(row.predictions[s], data.labels[s]);
    double sum = 0.0;
    for (double v : row.mae_per_slot) sum += v;
    row.mae_mean = sum / static_cast<double>(slots);
    double var = 0.0;
    for (double v : row.mae_per_slot) var += (v - row.mae_mean) * (v - row.mae_mean);
    row.mae_stdev = std::sqrt(var / static_cast<double>(slots));
    row.expected_win_rate = expected_win_rate(row.predictions, data.labels);
    row.regret = regret(row.predictions, data.labels);
  }
  return report;
}

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string report_csv(const EvalReport& report, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "algorithm,mae_mean,mae_stdev,expected_win_rate,regret\n";
  for (const auto& row : report.rows) {
    out += std::string(to_string(row.algorithm)) + "," + fixed(row.mae_mean) + "," + fixed(row.mae_stdev) + "," +
           fixed(row.expected_win_rate) + "," + fixed(row.regret) + "\n";
  }
  return out;
}

std::string slot_mae_csv(const EvalReport& report, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "algorithm";
  for (const auto& s : report.slots) out += "," + s.label();
  out += '\n';
  for (const auto& row : report.rows) {
    out += to_string(row.algorithm);
    for (double v : row.mae_per_slot) out += "," + fixed(v);
    out += '\n';
  }
  return out;
}

}  // namespace ludemic
