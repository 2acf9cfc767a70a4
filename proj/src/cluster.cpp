#include "ludemic/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "ludemic/error.hpp"
#include "ludemic/seeding.hpp"

namespace ludemic {

namespace {

Matrix squared_distances(const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) s += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
      d(i, j) = d(j, i) = s;
    }
  return d;
}

// Fills row i of `out` with p(j|i) at precision beta and returns its
// perplexity.
double calibrate_row(const Matrix& d, std::size_t i, double beta, Matrix& out) {
  const std::size_t n = d.rows();
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) dmin = std::min(dmin, d(i, j));
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out(i, j) = j == i ? 0.0 : std::exp(-beta * (d(i, j) - dmin));
    sum += out(i, j);
  }
  double h = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out(i, j) /= sum;
    if (out(i, j) > 0.0) h -= out(i, j) * std::log(out(i, j));
  }
  return std::exp(h);
}

}  // namespace

Matrix conditional_affinities(const Matrix& x, double perplexity) {
  const std::size_t n = x.rows();
  if (n < 3) throw Error(ErrorCode::DegenerateInput, "affinities need at least 3 rows");
  if (!(perplexity > 0.0) || perplexity >= static_cast<double>(n) - 1.0)
    throw Error(ErrorCode::PerplexityTooLarge,
                "perplexity " + std::to_string(perplexity) + " needs to be below " + std::to_string(n - 1));
  const Matrix d = squared_distances(x);
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
      const double perp = calibrate_row(d, i, beta, p);
      if (std::abs(perp - perplexity) < 1e-6) break;
      if (perp > perplexity) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
  }
  return p;
}

double row_perplexity(const Matrix& conditional, std::size_t row) {
  double h = 0.0;
  for (std::size_t j = 0; j < conditional.cols(); ++j) {
    const double v = conditional(row, j);
    if (j != row && v > 0.0) h -= v * std::log(v);
  }
  return std::exp(h);
}

Matrix affinities(const Matrix& x, double perplexity) {
  const Matrix c = conditional_affinities(x, perplexity);
  const std::size_t n = c.rows();
  Matrix p(n, n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      p(i, j) = (c(i, j) + c(j, i)) / (2.0 * static_cast<double>(n));
      sum += p(i, j);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= sum;
  return p;
}

namespace {

// Student-t kernel weights and their off-diagonal sum.
std::pair<Matrix, double> kernel(const Matrix& y) {
  const std::size_t n = y.rows();
  Matrix w(n, n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < y.cols(); ++k) d += (y(i, k) - y(j, k)) * (y(i, k) - y(j, k));
      w(i, j) = w(j, i) = 1.0 / (1.0 + d);
      z += 2.0 * w(i, j);
    }
  return {std::move(w), z};
}

Matrix gradient(const Matrix& p, const Matrix& y, double scale) {
  const auto [w, z] = kernel(y);
  const std::size_t n = y.rows();
  Matrix g(n, y.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double f = 4.0 * (scale * p(i, j) - w(i, j) / z) * w(i, j);
      for (std::size_t k = 0; k < y.cols(); ++k) g(i, k) += f * (y(i, k) - y(j, k));
    }
  return g;
}

}  // namespace

double kl_divergence(const Matrix& p, const Matrix& y) {
  const auto [w, z] = kernel(y);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      kl += p(i, j) * std::log(p(i, j) / (w(i, j) / z));
    }
  return std::max(kl, 0.0);
}

Matrix kl_gradient(const Matrix& p, const Matrix& y) { return gradient(p, y, 1.0); }

Embedding tsne(const Matrix& p, const TsneConfig& config) {
  const std::size_t n = p.rows();
  Embedding e;
  e.config = config;
  e.points = Matrix(n, 2);
  Rng rng(config.seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < 2; ++k) e.points(i, k) = 1e-4 * standard_normal(rng);
  e.initial_kl = kl_divergence(p, e.points);

  Matrix update(n, 2);
  Matrix gains(n, 2, 1.0);
  for (int it = 0; it < config.iterations; ++it) {
    const double scale = it < config.exaggeration_iterations ? config.exaggeration : 1.0;
    const double momentum = it < config.momentum_switch ? config.initial_momentum : config.final_momentum;
    const Matrix g = gradient(p, e.points, scale);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < 2; ++k) {
        double& gain = gains(i, k);
        gain = (g(i, k) > 0.0) != (update(i, k) > 0.0) ? gain + 0.2 : gain * 0.8;
        gain = std::max(gain, 0.01);
        update(i, k) = momentum * update(i, k) - config.learning_rate * gain * g(i, k);
        e.points(i, k) += update(i, k);
      }
    for (std::size_t k = 0; k < 2; ++k) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += e.points(i, k);
      m /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) e.points(i, k) -= m;
    }
  }
  e.final_kl = kl_divergence(p, e.points);
  return e;
}

double default_eps(const Matrix& points) {
  if (points.rows() == 0) return 1e-9;
  double diag = 0.0;
  for (std::size_t k = 0; k < points.cols(); ++k) {
    double lo = points(0, k), hi = points(0, k);
    for (std::size_t i = 1; i < points.rows(); ++i) {
      lo = std::min(lo, points(i, k));
      hi = std::max(hi, points(i, k));
    }
    diag += (hi - lo) * (hi - lo);
  }
  return std::max(0.05 * std::sqrt(diag), 1e-9);
}

std::vector<int> cluster_embedding(const Matrix& points, double eps, int min_points) {
  const std::size_t n = points.rows();
  std::vector<int> labels(n, -1);
  if (eps <= 0.0) return labels;
  const double eps2 = eps * eps;
  const auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < points.cols(); ++k) d += (points(i, k) - points(j, k)) * (points(i, k) - points(j, k));
      if (d <= eps2) out.push_back(j);
    }
    return out;
  };
  std::vector<bool> visited(n, false);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = true;
    auto seeds = neighbours(i);
    if (static_cast<int>(seeds.size()) < min_points) continue;
    const int id = next++;
    labels[i] = id;
    for (std::size_t q = 0; q < seeds.size(); ++q) {
      const std::size_t j = seeds[q];
      if (labels[j] == -1) labels[j] = id;
      if (visited[j]) continue;
      visited[j] = true;
      const auto more = neighbours(j);
      if (static_cast<int>(more.size()) >= min_points) seeds.insert(seeds.end(), more.begin(), more.end());
    }
  }
  return labels;
}

namespace {

struct GiniBuilder {
  const FeatureMatrix& f;
  const std::vector<int>& labels;
  int max_depth;
  ClusterExplanation& out;
  std::vector<std::pair<std::string, bool>> path;
  int correct = 0;

  static double gini(const std::map<int, int>& counts, int total) {
    if (total == 0) return 0.0;
    double s = 1.0;
    for (const auto& [_, c] : counts) s -= (static_cast<double>(c) / total) * (static_cast<double>(c) / total);
    return s;
  }

  std::map<int, int> count(const std::vector<std::size_t>& rows) const {
    std::map<int, int> c;
    for (std::size_t r : rows) ++c[labels[r]];
    return c;
  }

  void grow(const std::vector<std::size_t>& rows, int depth) {
    const auto counts = count(rows);
    const int total = static_cast<int>(rows.size());
    int best_feature = -1;
    if (depth < max_depth && counts.size() > 1) {
      const double parent = gini(counts, total) * total;
      double best = parent - 1e-12;
      for (std::size_t j = 0; j < f.cols(); ++j) {
        std::vector<std::size_t> yes, no;
        for (std::size_t r : rows) (f.x[r][j] ? yes : no).push_back(r);
        if (yes.empty() || no.empty()) continue;
        const double impurity = gini(count(yes), static_cast<int>(yes.size())) * static_cast<double>(yes.size()) +
                                gini(count(no), static_cast<int>(no.size())) * static_cast<double>(no.size());
        if (impurity < best) {
          best = impurity;
          best_feature = static_cast<int>(j);
        }
      }
    }
    if (best_feature < 0) {
      int label = counts.begin()->first;
      for (const auto& [l, c] : counts)
        if (c > counts.at(label)) label = l;
      correct += counts.at(label);
      out.rules.push_back({path, label, total});
      out.depth = std::max(out.depth, depth);
      return;
    }
    std::vector<std::size_t> yes, no;
    for (std::size_t r : rows) (f.x[r][static_cast<std::size_t>(best_feature)] ? yes : no).push_back(r);
    const std::string& ludeme = f.vocabulary[static_cast<std::size_t>(best_feature)];
    path.emplace_back(ludeme, true);
    grow(yes, depth + 1);
    path.back().second = false;
    grow(no, depth + 1);
    path.pop_back();
  }
};

}  // namespace

ClusterExplanation explain_clusters(const FeatureMatrix& features, const std::vector<int>& labels, int max_depth) {
  if (labels.size() != features.rows()) throw Error(ErrorCode::DegenerateInput, "one label per game required");
  ClusterExplanation out;
  out.labels = labels;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++out.sizes[labels[i]];
    if (labels[i] >= 0) rows.push_back(i);
  }
  if (rows.empty()) return out;
  GiniBuilder builder{features, labels, max_depth, out, {}, 0};
  builder.grow(rows, 0);
  out.accuracy = static_cast<double>(builder.correct) / static_cast<double>(rows.size());
  return out;
}

std::string embedding_csv(const std::vector<std::string>& games, const Embedding& embedding,
                          const std::vector<int>& labels, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "game,x,y,cluster\n";
  char buf[96];
  for (std::size_t i = 0; i < games.size(); ++i) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%d\n", embedding.points(i, 0), embedding.points(i, 1), labels[i]);
    out += games[i] + buf;
  }
  return out;
}

std::string explanation_text(const ClusterExplanation& e, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "clusters:";
  for (const auto& [label, size] : e.sizes) out += " " + (label < 0 ? std::string("noise") : std::to_string(label)) + "=" + std::to_string(size);
  out += "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "tree depth %d, training accuracy %.2f%%\n", e.depth, 100.0 * e.accuracy);
  out += buf;
  out += "rules:\n";
  for (const auto& rule : e.rules) {
    std::string cond;
    for (const auto& [ludeme, present] : rule.conditions) {
      if (!cond.empty()) cond += " AND ";
      cond += ludeme + (present ? " present" : " absent");
    }
    if (cond.empty()) cond = "always";
    out += "  " + cond + " -> cluster " + std::to_string(rule.cluster) + " (" + std::to_string(rule.support) + " games)\n";
  }
  return out;
}

}  // namespace ludemic
