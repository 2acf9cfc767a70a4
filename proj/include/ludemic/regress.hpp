#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ludemic/matrix.hpp"

namespace ludemic {

enum class Algorithm { Naive, Ridge, Lasso, ElasticNet, KNeighbors, DecisionTree, RandomForest, GradientBoosting };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::RandomForest, Algorithm::GradientBoosting, Algorithm::KNeighbors, Algorithm::ElasticNet,
    Algorithm::Lasso,        Algorithm::Ridge,            Algorithm::DecisionTree, Algorithm::Naive,
};

std::string_view to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

/// Fixed defaults; reports record them alongside results.
struct Hyperparameters {
  double ridge_lambda = 1.0;
  double lasso_lambda = 1.0;
  double elastic_lambda = 1.0;
  double elastic_l1_ratio = 0.5;
  double cd_tolerance = 1e-6;
  int cd_max_sweeps = 10000;
  int neighbours = 5;
  int tree_min_leaf = 5;
  int forest_trees = 100;
  bool forest_bootstrap = true;
  /// Features tried per split; 0 means ceil(sqrt(features)).
  int forest_max_features = 0;
  int boosting_rounds = 100;
  int boosting_depth = 3;
  int boosting_min_leaf = 1;
  double learning_rate = 0.1;
};

/// Regression tree stored as a flat node array; node 0 is the root.
struct RegressionTree {
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;

  double predict(std::span<const double> x) const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct TreeParams {
  int min_leaf = 1;
  int max_depth = -1;    // unlimited when negative
  int max_features = 0;  // all when <= 0
};

/// CART regression with variance-reduction splits. `rows` may repeat
/// (bootstrap samples).
RegressionTree fit_tree(const Matrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                        const TreeParams& params, std::uint64_t seed);

struct NaiveModel {
  double mean = 0.0;
};

/// Ridge, Lasso and ElasticNet share this form.
struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coef;
  int sweeps = 0;  // coordinate-descent sweeps used, 0 for closed form
};

struct NeighboursModel {
  Matrix x;
  std::vector<double> y;
  int k = 5;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
};

struct BoostedModel {
  double init = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
};

class RegressionModel {
 public:
  using Fitted = std::variant<NaiveModel, LinearModel, NeighboursModel, RegressionTree, ForestModel, BoostedModel>;

  RegressionModel(Algorithm algorithm, Hyperparameters params, Fitted fitted)
      : algorithm_(algorithm), params_(params), fitted_(std::move(fitted)) {}

  Algorithm algorithm() const { return algorithm_; }
  const Hyperparameters& hyperparameters() const { return params_; }
  const Fitted& fitted() const { return fitted_; }

  /// Unclamped model output.
  double predict_raw(std::span<const double> x) const;
  /// Clamped to the [0, 100] win-percentage range.
  double predict(std::span<const double> x) const;

 private:
  Algorithm algorithm_;
  Hyperparameters params_;
  Fitted fitted_;
};

/// Throws DegenerateInput for zero rows or mismatched lengths.
RegressionModel fit(Algorithm algorithm, const Matrix& x, std::span<const double> y, std::uint64_t seed,
                    const Hyperparameters& params = {});

/// Leave-one-out predictions; fold i is fitted on every row but i with a
/// seed derived from (seed, i).
std::vector<double> loocv(Algorithm algorithm, const Matrix& x, std::span<const double> y, std::uint64_t seed,
                          const Hyperparameters& params = {}, int threads = 1);

}  // namespace ludemic
