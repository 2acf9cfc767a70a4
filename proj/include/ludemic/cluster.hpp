#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ludemic/dataset.hpp"
#include "ludemic/matrix.hpp"

namespace ludemic {

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  double exaggeration = 12.0;
  int exaggeration_iterations = 250;
  std::uint64_t seed = 0;
};

/// Row-conditional affinities p(j|i), each row calibrated by binary search on
/// the Gaussian precision to the target perplexity. Throws PerplexityTooLarge
/// unless perplexity < rows - 1, DegenerateInput for fewer than 3 rows.
Matrix conditional_affinities(const Matrix& x, double perplexity);

/// exp of the Shannon entropy (nats) of one conditional row, self excluded.
double row_perplexity(const Matrix& conditional, std::size_t row);

/// Symmetrised joint affinities (P + P^T) / 2n, summing to 1.
Matrix affinities(const Matrix& x, double perplexity);

/// KL(P || Q) for the Student-t kernel Q of embedding y.
double kl_divergence(const Matrix& p, const Matrix& y);
/// Gradient of kl_divergence with respect to y.
Matrix kl_gradient(const Matrix& p, const Matrix& y);

struct Embedding {
  Matrix points;  // rows x 2
  double initial_kl = 0.0;
  double final_kl = 0.0;
  TsneConfig config;
};

Embedding tsne(const Matrix& p, const TsneConfig& config);

/// 5% of the bounding-box diagonal, never below a tiny floor.
double default_eps(const Matrix& points);

/// Density-based clustering. Labels start at 0 in order of discovery; noise
/// is -1. eps <= 0 labels everything noise.
std::vector<int> cluster_embedding(const Matrix& points, double eps, int min_points = 4);

struct ClusterRule {
  std::vector<std::pair<std::string, bool>> conditions;  // (ludeme, present)
  int cluster = -1;
  int support = 0;  // training games reaching this leaf
};

struct ClusterExplanation {
  std::vector<int> labels;
  std::map<int, int> sizes;  // noise included under -1
  std::vector<ClusterRule> rules;
  double accuracy = 0.0;  // on non-noise games
  int depth = 0;
};

/// Gini classification tree on binary ludeme features, fitted on non-noise
/// games. Split ties favour the lower feature index.
ClusterExplanation explain_clusters(const FeatureMatrix& features, const std::vector<int>& labels, int max_depth = 3);

std::string embedding_csv(const std::vector<std::string>& games, const Embedding& embedding,
                          const std::vector<int>& labels, const std::string& comment = "");
std::string explanation_text(const ClusterExplanation& explanation, const std::string& comment = "");

}  // namespace ludemic
