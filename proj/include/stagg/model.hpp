// SPDX-License-Identifier: Apache-2.0
#pragma once

// Core data model. Positions inside ranking inputs are 1-based; ranks inside
// the engine are 0-based with rank 0 the best.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stagg {

/// Dense item index within one query, 0..n-1.
using ItemId = std::uint32_t;

/// One ranking input restricted to the items it actually ranks. Absent items
/// have no position.
class PartialRanking {
 public:
  PartialRanking() = default;

  /// positions[j] is the 1-based position of item j, or nullopt if absent.
  /// The present positions must be exactly {1..k}.
  static PartialRanking from_positions(std::vector<std::optional<std::uint32_t>> positions);

  /// Builds a ranking over n items from present items listed best-first.
  static PartialRanking from_order(std::size_t n, std::span<const ItemId> order);

  std::size_t item_count() const noexcept { return positions_.size(); }
  /// Number of present items (k).
  std::size_t size() const noexcept { return order_.size(); }
  bool full() const noexcept { return order_.size() == positions_.size(); }

  bool contains(ItemId item) const { return positions_.at(item).has_value(); }
  std::optional<std::uint32_t> position(ItemId item) const { return positions_.at(item); }
  /// Present items, best first.
  std::span<const ItemId> order() const noexcept { return order_; }

  friend bool operator==(const PartialRanking&, const PartialRanking&) = default;

 private:
  std::vector<std::optional<std::uint32_t>> positions_;
  std::vector<ItemId> order_;
};

struct QueryInstance {
  std::string query_id;
  std::vector<std::string> doc_names;  // size n, indexed by ItemId
  std::vector<PartialRanking> inputs;  // size m
  std::optional<std::vector<int>> labels;

  std::size_t n() const noexcept { return doc_names.size(); }
  std::size_t m() const noexcept { return inputs.size(); }
  bool labeled() const noexcept { return labels.has_value(); }

  /// Throws InvalidArgument when an invariant does not hold.
  void validate() const;

  friend bool operator==(const QueryInstance&, const QueryInstance&) = default;
};

/// Query data keyed by external document names, before dense re-indexing.
struct RawQuery {
  std::string query_id;
  std::vector<std::string> doc_keys;
  /// grades[d]; nullopt when the query is unlabeled.
  std::optional<std::vector<int>> grades;
  /// raw_positions[i][d]: position of doc d in input i as given, or nullopt.
  std::vector<std::vector<std::optional<long>>> raw_positions;
};

/// Dense re-indexing: ids follow doc_keys order, positions are compacted to
/// 1..k preserving relative order. Throws InvalidArgument on duplicate keys or
/// duplicate positions within one input.
QueryInstance reindex(const RawQuery& raw);

struct ScoredItem {
  ItemId item;
  double score;
  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

/// Final ranking of one query, descending score, ties by ascending ItemId.
struct QueryRun {
  std::string query_id;
  std::vector<std::string> doc_names;
  std::vector<ScoredItem> ranking;
  friend bool operator==(const QueryRun&, const QueryRun&) = default;
};

using AggregateRun = std::vector<QueryRun>;

/// Sorts items by descending score with the ascending-ItemId tie rule.
/// Throws InvalidArgument on non-finite scores or a size mismatch.
QueryRun rank_by_scores(const QueryInstance& q, std::span<const double> scores);

/// Item order (best first) from scores, same tie rule.
std::vector<ItemId> order_by_scores(std::span<const double> scores);

enum class MappingKind { bf, mf, tf };
enum class ObjectiveKind { ndcg, err, rbp };

std::string_view to_string(MappingKind kind);
std::string_view to_string(ObjectiveKind kind);
MappingKind parse_mapping_kind(std::string_view text);
ObjectiveKind parse_objective_kind(std::string_view text);

/// Feature dimension: m for BF, 3pm for MF, 2p for TF.
std::size_t feature_dimension(MappingKind kind, std::size_t m, std::size_t p);

struct AggregationModel {
  std::vector<double> weights;
  double sigma = 0.01;
  MappingKind mapping = MappingKind::bf;
  std::size_t factor_rank = 5;
  ObjectiveKind objective = ObjectiveKind::ndcg;
  double rbp_p = 0.95;
  int y_max = 2;
  /// Input count the model was trained on; needed to check BF/MF dimensions.
  std::optional<std::size_t> num_inputs;
  /// Seed for the CP initialisation used by TF features.
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const AggregationModel&, const AggregationModel&) = default;
};

}  // namespace stagg
