// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment harnesses: a seeded synthetic generator in the shape of the
// LETOR aggregation sets, k-fold partitions, and the robustness sweep over
// the number of ranking inputs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stagg/metrics.hpp"
#include "stagg/model.hpp"
#include "stagg/unsup.hpp"

namespace stagg::experiments {

inline constexpr std::size_t kMaxEmptyInputRetries = 100;

struct SyntheticConfig {
  std::size_t n_queries = 200;
  std::size_t n_items = 30;
  std::size_t m_inputs = 20;
  double missing_rate = 0.5;
  double noise = 0.1;  // adjacent-swap probability
  int y_max = 2;
  std::uint64_t seed = 1;
};

/// Per query: a planted permutation with graded labels (quantile buckets of
/// the planted position), and m inputs made by one adjacent-swap noise pass
/// followed by independent deletion.
std::vector<QueryInstance> generate_synthetic(const SyntheticConfig& config);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

/// Shuffles indices 0..count-1 and splits them into k folds; partition i
/// tests on fold i, validates on fold (i+1) mod k and trains on the rest.
std::vector<Fold> kfold(std::size_t count, std::size_t k, std::uint64_t seed);

std::vector<QueryInstance> select(std::span<const QueryInstance> instances,
                                  std::span<const std::size_t> indices);

/// Keeps `size` inputs per query chosen without replacement.
std::vector<QueryInstance> subsample_inputs(std::span<const QueryInstance> instances,
                                            std::size_t size, std::uint64_t seed);

struct SweepConfig {
  std::vector<unsup::Method> methods{unsup::Method::borda, unsup::Method::rrf,
                                     unsup::Method::stagg_bc, unsup::Method::stagg_rrf};
  std::vector<std::size_t> sizes{5, 10, 15, 20};
  std::size_t repetitions = 20;
  metrics::MetricSpec metric{metrics::Kind::ndcg, 5, 0.95, 2};
  unsup::Params params{};
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct SweepCell {
  unsup::Method method;
  std::size_t size;
  std::size_t repetition;
  double value;
};

struct SweepSummary {
  unsup::Method method;
  std::size_t size;
  double mean;
  double stddev;  // population standard deviation over repetitions
};

struct SweepResult {
  std::string metric_name;
  std::vector<SweepCell> cells;
  std::vector<SweepSummary> summary;

  /// `method,size,repetition,metric,value` then `method,size,ALL,mean|std,value`.
  std::string to_csv() const;
  const SweepSummary& find(unsup::Method method, std::size_t size) const;
};

SweepResult robustness_sweep(std::span<const QueryInstance> instances, const SweepConfig& config);

}  // namespace stagg::experiments
