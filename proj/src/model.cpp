// SPDX-License-Identifier: Apache-2.0
#include "stagg/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "stagg/errors.hpp"

namespace stagg {

PartialRanking PartialRanking::from_positions(std::vector<std::optional<std::uint32_t>> positions) {
  PartialRanking ranking;
  std::size_t k = 0;
  for (const auto& pos : positions)
    if (pos) ++k;
  std::vector<ItemId> order(k, 0);
  std::vector<bool> seen(k, false);
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (!positions[j]) continue;
    const std::uint32_t pos = *positions[j];
    if (pos < 1 || pos > k)
      throw InvalidArgument("position " + std::to_string(pos) + " outside 1.." + std::to_string(k));
    if (seen[pos - 1]) throw InvalidArgument("duplicate position " + std::to_string(pos));
    seen[pos - 1] = true;
    order[pos - 1] = static_cast<ItemId>(j);
  }
  ranking.positions_ = std::move(positions);
  ranking.order_ = std::move(order);
  return ranking;
}

PartialRanking PartialRanking::from_order(std::size_t n, std::span<const ItemId> order) {
  std::vector<std::optional<std::uint32_t>> positions(n);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (order[r] >= n) throw InvalidArgument("item id out of range");
    if (positions[order[r]]) throw InvalidArgument("item listed twice in ranking");
    positions[order[r]] = static_cast<std::uint32_t>(r + 1);
  }
  return from_positions(std::move(positions));
}

void QueryInstance::validate() const {
  if (n() < 1) throw InvalidArgument("query " + query_id + ": no items");
  if (m() < 1) throw InvalidArgument("query " + query_id + ": no ranking inputs");
  for (const auto& input : inputs)
    if (input.item_count() != n())
      throw InvalidArgument("query " + query_id + ": ranking input over wrong item count");
  if (labels) {
    if (labels->size() != n()) throw InvalidArgument("query " + query_id + ": label count != n");
    for (int y : *labels)
      if (y < 0) throw InvalidArgument("query " + query_id + ": negative grade");
  }
}

QueryInstance reindex(const RawQuery& raw) {
  const std::size_t n = raw.doc_keys.size();
  std::unordered_set<std::string> keys;
  for (const auto& key : raw.doc_keys)
    if (!keys.insert(key).second)
      throw InvalidArgument("query " + raw.query_id + ": duplicate document key " + key);
  if (raw.grades && raw.grades->size() != n)
    throw InvalidArgument("query " + raw.query_id + ": grade count != document count");

  QueryInstance q;
  q.query_id = raw.query_id;
  q.doc_names = raw.doc_keys;
  q.labels = raw.grades;
  q.inputs.reserve(raw.raw_positions.size());
  for (const auto& column : raw.raw_positions) {
    if (column.size() != n)
      throw InvalidArgument("query " + raw.query_id + ": input column size != document count");
    std::vector<ItemId> present;
    for (std::size_t d = 0; d < n; ++d)
      if (column[d]) present.push_back(static_cast<ItemId>(d));
    std::stable_sort(present.begin(), present.end(),
                     [&](ItemId a, ItemId b) { return *column[a] < *column[b]; });
    for (std::size_t r = 1; r < present.size(); ++r)
      if (*column[present[r]] == *column[present[r - 1]])
        throw InvalidArgument("query " + raw.query_id + ": duplicate position " +
                              std::to_string(*column[present[r]]));
    q.inputs.push_back(PartialRanking::from_order(n, present));
  }
  return q;
}

std::vector<ItemId> order_by_scores(std::span<const double> scores) {
  std::vector<ItemId> order(scores.size());
  std::iota(order.begin(), order.end(), ItemId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](ItemId a, ItemId b) { return scores[a] > scores[b]; });
  return order;
}

QueryRun rank_by_scores(const QueryInstance& q, std::span<const double> scores) {
  if (scores.size() != q.n()) throw InvalidArgument("score vector size != item count");
  for (double s : scores)
    if (!std::isfinite(s)) throw InvalidArgument("query " + q.query_id + ": non-finite score");
  QueryRun run;
  run.query_id = q.query_id;
  run.doc_names = q.doc_names;
  run.ranking.reserve(scores.size());
  for (ItemId item : order_by_scores(scores)) run.ranking.push_back({item, scores[item]});
  return run;
}

std::string_view to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::bf: return "BF";
    case MappingKind::mf: return "MF";
    case MappingKind::tf: return "TF";
  }
  return "?";
}

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::ndcg: return "NDCG_s";
    case ObjectiveKind::err: return "ERR_s";
    case ObjectiveKind::rbp: return "RBP_s";
  }
  return "?";
}

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

MappingKind parse_mapping_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "bf") return MappingKind::bf;
  if (t == "mf") return MappingKind::mf;
  if (t == "tf") return MappingKind::tf;
  throw InvalidArgument("unknown feature mapping: " + std::string(text));
}

ObjectiveKind parse_objective_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "ndcg" || t == "ndcg_s") return ObjectiveKind::ndcg;
  if (t == "err" || t == "err_s") return ObjectiveKind::err;
  if (t == "rbp" || t == "rbp_s") return ObjectiveKind::rbp;
  throw InvalidArgument("unknown objective: " + std::string(text));
}

std::size_t feature_dimension(MappingKind kind, std::size_t m, std::size_t p) {
  switch (kind) {
    case MappingKind::bf: return m;
    case MappingKind::mf: return 3 * p * m;
    case MappingKind::tf: return 2 * p;
  }
  return 0;
}

void AggregationModel::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("model sigma must be > 0");
  if (!(rbp_p >= 0.0 && rbp_p <= 1.0)) throw InvalidArgument("model rbp_p outside [0,1]");
  if (y_max < 0) throw InvalidArgument("model y_max must be >= 0");
  if (mapping != MappingKind::bf && factor_rank < 1)
    throw InvalidArgument("model factor_rank must be >= 1");
  for (double w : weights)
    if (!std::isfinite(w)) throw InvalidArgument("model weights must be finite");
  const std::size_t d = weights.size();
  if (num_inputs) {
    const std::size_t expected = feature_dimension(mapping, *num_inputs, factor_rank);
    if (d != expected)
      throw InvalidArgument("weight dimension " + std::to_string(d) + " != " +
                            std::to_string(expected) + " for mapping " +
                            std::string(to_string(mapping)));
  } else if (mapping == MappingKind::tf && d != 2 * factor_rank) {
    throw InvalidArgument("weight dimension must be 2p for TF");
  } else if (mapping == MappingKind::mf && (d == 0 || d % (3 * factor_rank) != 0)) {
    throw InvalidArgument("weight dimension must be a multiple of 3p for MF");
  }
}

}  // namespace stagg
