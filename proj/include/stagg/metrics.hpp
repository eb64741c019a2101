// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stagg/model.hpp"

namespace stagg::metrics {

enum class Kind { ndcg, err, rbp };

struct MetricSpec {
  Kind kind = Kind::ndcg;
  std::size_t cutoff = 0;  // NDCG only, 0 = full depth
  double rbp_p = 0.95;
  int y_max = 2;

  /// "ndcg@5", "ndcg", "err", "rbp".
  std::string name() const;
};

/// Parses "ndcg", "ndcg@k", "err" or "rbp".
MetricSpec parse_metric(std::string_view text, double rbp_p = 0.95, int y_max = 2);
std::vector<MetricSpec> parse_metric_list(std::string_view csv, double rbp_p = 0.95, int y_max = 2);

/// 2^y - 1
double gain(int label);
/// 1 / log2(1 + pos), pos 1-based.
double discount(std::size_t pos);
/// (2^y - 1) / 2^y_max
double satisfaction(int label, int y_max);

/// DCG of the label-sorted ordering truncated at k (k clamped to n, 0 = n).
double ideal_dcg(std::span<const int> labels, std::size_t k);

/// 1.0 when the ideal DCG is zero.
double ndcg(std::span<const ItemId> ranking, std::span<const int> labels, std::size_t k);
double err(std::span<const ItemId> ranking, std::span<const int> labels, int y_max);
double rbp(std::span<const ItemId> ranking, std::span<const int> labels, double p);

double evaluate(std::span<const ItemId> ranking, std::span<const int> labels,
                const MetricSpec& spec);

struct MetricTable {
  std::vector<MetricSpec> specs;
  std::vector<std::string> query_ids;
  std::vector<std::vector<double>> values;  // [query][metric]
  std::vector<double> means;                // unweighted over queries

  /// `qid,metric,value` rows per query then `ALL,<metric>,<mean>`.
  std::string to_csv() const;
};

/// Evaluates every run query against its labeled instance. Throws
/// InvalidArgument for unknown queries/items or unlabeled instances.
MetricTable evaluate_run(const AggregateRun& run, std::span<const QueryInstance> instances,
                         std::span<const MetricSpec> specs);

}  // namespace stagg::metrics
