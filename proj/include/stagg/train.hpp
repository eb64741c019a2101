// SPDX-License-Identifier: Apache-2.0
#pragma once

// Supervised aggregation. Item scores come from a linear model over mapped
// features; each score carries Gaussian noise with scale sigma, which turns
// every pairwise order into a probit contest and every rank into a
// (normal-approximated) Poisson-binomial variable. Training maximises the
// expectation of NDCG / ERR / RBP under those rank distributions.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stagg/features.hpp"
#include "stagg/metrics.hpp"
#include "stagg/model.hpp"

namespace stagg::train {

struct Objective {
  ObjectiveKind kind = ObjectiveKind::ndcg;
  double rbp_p = 0.95;
  int y_max = 2;
};

std::vector<double> score_items(const features::FeatureTable& features, std::span<const double> w);

struct QueryEvaluation {
  double value = 0.0;
  std::vector<double> score_gradient;  // d value / d score_j, empty unless requested
};

/// Expected objective of one labeled query under the normal approximation,
/// optionally with its gradient in the item scores. ERR stop probabilities
/// follow the score-sorted reference ranking and, like DCG_max, are held
/// constant in the gradient.
QueryEvaluation evaluate_query(const QueryInstance& q, std::span<const double> scores,
                               double sigma, const Objective& objective, bool with_gradient);

double expected_objective(const QueryInstance& q, std::span<const double> scores, double sigma,
                          const Objective& objective);

/// Same objective with the exact Poisson-binomial rank distributions.
/// Diagnostics only; training uses the normal approximation.
double expected_objective_exact(const QueryInstance& q, std::span<const double> scores,
                                double sigma, const Objective& objective);

/// Gradient of expected_objective with respect to the weights w.
std::vector<double> objective_gradient(const QueryInstance& q,
                                       const features::FeatureTable& features,
                                       std::span<const double> w, double sigma,
                                       const Objective& objective);

struct TrainConfig {
  std::vector<double> learning_rate_grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> sigma_grid{1e-1, 1e-2, 1e-3, 1e-4};
  std::size_t max_iterations = 500;
  Objective objective{};
  MappingKind mapping = MappingKind::bf;
  std::size_t factor_rank = features::kDefaultFactorRank;
  std::uint64_t seed = 1;
  /// Deterministic metric used to pick the grid point and iteration.
  metrics::MetricSpec selection{metrics::Kind::ndcg, 10, 0.95, 2};
  std::size_t threads = 1;
};

struct LogRow {
  double learning_rate;
  double sigma;
  std::size_t iteration;
  double train_objective;
  double valid_metric;
};

struct FitResult {
  AggregationModel model;
  std::vector<LogRow> log;
  double best_learning_rate = 0.0;
  std::size_t best_iteration = 0;
  double best_valid_metric = 0.0;
};

/// Grid search over (learning rate, sigma); each grid point runs full-batch
/// gradient ascent from w = 0 and the best validation iterate is returned.
FitResult fit(std::span<const QueryInstance> train_set, std::span<const QueryInstance> valid_set,
              const TrainConfig& config);

/// `grid_lr,grid_sigma,iteration,train_objective,valid_metric`
std::string log_to_csv(const std::vector<LogRow>& log);

features::FeatureOptions feature_options(const AggregationModel& model);

QueryRun predict(const AggregationModel& model, const QueryInstance& q);
AggregateRun predict(const AggregationModel& model, std::span<const QueryInstance> instances,
                     std::size_t threads = 1);

}  // namespace stagg::train
