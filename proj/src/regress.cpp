#include "ludemic/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ludemic/error.hpp"
#include "ludemic/seeding.hpp"

namespace ludemic {

namespace {

constexpr std::pair<Algorithm, std::string_view> kNames[] = {
    {Algorithm::Naive, "Naive"},
    {Algorithm::Ridge, "Ridge"},
    {Algorithm::Lasso, "Lasso"},
    {Algorithm::ElasticNet, "ElasticNet"},
    {Algorithm::KNeighbors, "KNeighbors"},
    {Algorithm::DecisionTree, "DecisionTree"},
    {Algorithm::RandomForest, "RandomForest"},
    {Algorithm::GradientBoosting, "GradientBoosting"},
};

double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> column_means(const Matrix& x) {
  std::vector<double> m(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) m[j] += x(i, j);
  for (double& v : m) v /= static_cast<double>(x.rows());
  return m;
}

LinearModel fit_ridge(const Matrix& x, std::span<const double> y, double lambda) {
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto p = static_cast<Eigen::Index>(x.cols());
  const auto xm = column_means(x);
  const double ym = mean(y);
  Eigen::MatrixXd xc(n, p);
  Eigen::VectorXd yc(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    yc(i) = y[static_cast<std::size_t>(i)] - ym;
    for (Eigen::Index j = 0; j < p; ++j)
      xc(i, j) = x(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - xm[static_cast<std::size_t>(j)];
  }
  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd w = gram.ldlt().solve(xc.transpose() * yc);
  LinearModel m;
  m.coef.assign(w.data(), w.data() + p);
  m.intercept = ym;
  for (Eigen::Index j = 0; j < p; ++j) m.intercept -= xm[static_cast<std::size_t>(j)] * w(j);
  return m;
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Minimises (1/2n)|y - b - Xw|^2 + lambda*l1*|w|_1 + lambda*(1-l1)/2*|w|^2.
LinearModel fit_coordinate_descent(const Matrix& x, std::span<const double> y, double lambda, double l1,
                                   const Hyperparameters& hp) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const auto xm = column_means(x);
  const double ym = mean(y);
  Matrix xc(n, p);
  std::vector<double> norm(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      xc(i, j) = x(i, j) - xm[j];
      norm[j] += xc(i, j) * xc(i, j);
    }
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - ym;
  std::vector<double> w(p, 0.0);
  const double nd = static_cast<double>(n);
  int sweep = 0;
  while (sweep < hp.cd_max_sweeps) {
    ++sweep;
    double max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (norm[j] == 0.0) continue;
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) rho += xc(i, j) * r[i];
      rho += norm[j] * w[j];
      const double updated = soft_threshold(rho, nd * lambda * l1) / (norm[j] + nd * lambda * (1.0 - l1));
      const double delta = updated - w[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) r[i] -= delta * xc(i, j);
        w[j] = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    if (max_change < hp.cd_tolerance) break;
  }
  LinearModel m;
  m.coef = w;
  m.intercept = ym;
  for (std::size_t j = 0; j < p; ++j) m.intercept -= xm[j] * w[j];
  m.sweeps = sweep;
  return m;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const TreeParams& params, std::uint64_t seed)
      : x_(x), y_(y), params_(params), rng_(seed) {
    const auto p = static_cast<int>(x.cols());
    features_ = params.max_features <= 0 ? p : std::min(params.max_features, p);
    order_.resize(x.cols());
    std::iota(order_.begin(), order_.end(), 0);
  }

  RegressionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double sum = 0.0;
    for (std::size_t r : rows) sum += y_[r];
    const double n = static_cast<double>(rows.size());
    tree_.nodes[static_cast<std::size_t>(id)].value = sum / n;

    const auto min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
    if (rows.size() < 2 * min_leaf) return id;
    if (params_.max_depth >= 0 && depth >= params_.max_depth) return id;
    const double first = y_[rows.front()];
    if (std::all_of(rows.begin(), rows.end(), [&](std::size_t r) { return y_[r] == first; })) return id;

    const double parent = sum * sum / n;
    double best_gain = 1e-12 * std::max(1.0, std::abs(parent));
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, double>> pairs(rows.size());
    for (std::size_t f : candidate_features()) {
      for (std::size_t i = 0; i < rows.size(); ++i) pairs[i] = {x_(rows[i], f), y_[rows[i]]};
      std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      double left = 0.0;
      for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        left += pairs[i].second;
        if (pairs[i].first == pairs[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = pairs.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double right = sum - left;
        const double gain =
            left * left / static_cast<double>(nl) + right * right / static_cast<double>(nr) - parent;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (pairs[i].first + pairs[i + 1].first);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> lo, hi;
    for (std::size_t r : rows) (x_(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? lo : hi).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(lo, depth + 1);
    const int h = grow(hi, depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = h;
    return id;
  }

  // All features in index order, or a sorted random subset.
  std::vector<std::size_t> candidate_features() {
    if (features_ >= static_cast<int>(order_.size())) return order_;
    std::vector<std::size_t> pool = order_;
    for (int i = 0; i < features_; ++i) {
      const auto pick = static_cast<std::size_t>(i) + uniform_index(rng_, pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
    }
    pool.resize(static_cast<std::size_t>(features_));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  const Matrix& x_;
  std::span<const double> y_;
  TreeParams params_;
  Rng rng_;
  int features_ = 0;
  std::vector<std::size_t> order_;
  RegressionTree tree_;
};

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

ForestModel fit_forest(const Matrix& x, std::span<const double> y, std::uint64_t seed, const Hyperparameters& hp) {
  ForestModel m;
  const int features = hp.forest_max_features > 0
                           ? hp.forest_max_features
                           : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));
  const TreeParams params{hp.tree_min_leaf, -1, std::max(1, features)};
  for (int t = 0; t < hp.forest_trees; ++t) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t), 0}));
    std::vector<std::size_t> rows;
    if (hp.forest_bootstrap) {
      rows.resize(x.rows());
      for (auto& r : rows) r = uniform_index(rng, x.rows());
    } else {
      rows = all_rows(x.rows());
    }
    m.trees.push_back(fit_tree(x, y, rows, params, derive_seed(seed, {static_cast<std::uint64_t>(t), 1})));
  }
  return m;
}

BoostedModel fit_boosting(const Matrix& x, std::span<const double> y, std::uint64_t seed, const Hyperparameters& hp) {
  BoostedModel m;
  m.init = mean(y);
  m.learning_rate = hp.learning_rate;
  std::vector<double> f(y.size(), m.init);
  std::vector<double> residual(y.size());
  const auto rows = all_rows(x.rows());
  const TreeParams params{hp.boosting_min_leaf, hp.boosting_depth, 0};
  for (int t = 0; t < hp.boosting_rounds; ++t) {
    for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - f[i];
    m.trees.push_back(fit_tree(x, residual, rows, params, derive_seed(seed, {static_cast<std::uint64_t>(t)})));
    for (std::size_t i = 0; i < y.size(); ++i) f[i] += m.learning_rate * m.trees.back().predict(x.row(i));
  }
  return m;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  for (const auto& [alg, name] : kNames)
    if (alg == a) return name;
  return "?";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  for (const auto& [alg, n] : kNames)
    if (n == name) return alg;
  return std::nullopt;
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

RegressionTree fit_tree(const Matrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                        const TreeParams& params, std::uint64_t seed) {
  if (rows.empty()) throw Error(ErrorCode::DegenerateInput, "tree needs at least one row");
  TreeBuilder builder(x, y, params, seed);
  return builder.build({rows.begin(), rows.end()});
}

double RegressionModel::predict_raw(std::span<const double> x) const {
  struct Visitor {
    std::span<const double> x;
    double operator()(const NaiveModel& m) const { return m.mean; }
    double operator()(const LinearModel& m) const {
      double v = m.intercept;
      for (std::size_t j = 0; j < m.coef.size(); ++j) v += m.coef[j] * x[j];
      return v;
    }
    double operator()(const NeighboursModel& m) const {
      std::vector<std::pair<double, std::size_t>> d(m.x.rows());
      for (std::size_t i = 0; i < m.x.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.x.cols(); ++j) s += (m.x(i, j) - x[j]) * (m.x(i, j) - x[j]);
        d[i] = {s, i};
      }
      const std::size_t k = std::min(d.size(), static_cast<std::size_t>(std::max(1, m.k)));
      std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += m.y[d[i].second];
      return sum / static_cast<double>(k);
    }
    double operator()(const RegressionTree& t) const { return t.predict(x); }
    double operator()(const ForestModel& m) const {
      double sum = 0.0;
      for (const auto& t : m.trees) sum += t.predict(x);
      return sum / static_cast<double>(m.trees.size());
    }
    double operator()(const BoostedModel& m) const {
      double v = m.init;
      for (const auto& t : m.trees) v += m.learning_rate * t.predict(x);
      return v;
    }
  };
  return std::visit(Visitor{x}, fitted_);
}

double RegressionModel::predict(std::span<const double> x) const { return std::clamp(predict_raw(x), 0.0, 100.0); }

RegressionModel fit(Algorithm algorithm, const Matrix& x, std::span<const double> y, std::uint64_t seed,
                    const Hyperparameters& hp) {
  if (x.rows() == 0) throw Error(ErrorCode::DegenerateInput, "no training rows");
  if (y.size() != x.rows()) throw Error(ErrorCode::DegenerateInput, "label count does not match rows");
  RegressionModel::Fitted fitted;
  switch (algorithm) {
    case Algorithm::Naive:
      fitted = NaiveModel{mean(y)};
      break;
    case Algorithm::Ridge:
      fitted = fit_ridge(x, y, hp.ridge_lambda);
      break;
    case Algorithm::Lasso:
      fitted = fit_coordinate_descent(x, y, hp.lasso_lambda, 1.0, hp);
      break;
    case Algorithm::ElasticNet:
      fitted = fit_coordinate_descent(x, y, hp.elastic_lambda, hp.elastic_l1_ratio, hp);
      break;
    case Algorithm::KNeighbors:
      fitted = NeighboursModel{x, {y.begin(), y.end()}, hp.neighbours};
      break;
    case Algorithm::DecisionTree:
      fitted = fit_tree(x, y, all_rows(x.rows()), TreeParams{hp.tree_min_leaf, -1, 0}, seed);
      break;
    case Algorithm::RandomForest:
      fitted = fit_forest(x, y, seed, hp);
      break;
    case Algorithm::GradientBoosting:
      fitted = fit_boosting(x, y, seed, hp);
      break;
  }
  return RegressionModel(algorithm, hp, std::move(fitted));
}

std::vector<double> loocv(Algorithm algorithm, const Matrix& x, std::span<const double> y, std::uint64_t seed,
                          const Hyperparameters& hp, int threads) {
  const std::size_t n = x.rows();
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "leave-one-out needs at least two rows");
  if (y.size() != n) throw Error(ErrorCode::DegenerateInput, "label count does not match rows");
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::size_t> keep;
    keep.reserve(n - 1);
    for (std::size_t r = 0; r < n; ++r)
      if (r != i) keep.push_back(r);
    const Matrix train = x.select_rows(keep);
    std::vector<double> labels;
    labels.reserve(n - 1);
    for (std::size_t r : keep) labels.push_back(y[r]);
    const auto model = fit(algorithm, train, labels, derive_seed(seed, {static_cast<std::uint64_t>(i)}), hp);
    out[i] = model.predict(x.row(i));
  });
  return out;
}

}  // namespace ludemic
