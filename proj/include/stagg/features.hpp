// SPDX-License-Identifier: Apache-2.0
#pragma once

// Item feature mappings for the supervised aggregator:
//   BF  normalised Borda position per input                 (dimension m)
//   MF  per-input truncated SVD of the preference matrix    (dimension 3pm)
//   TF  CP factors of the item x item x input tensor        (dimension 2p)

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stagg/linalg.hpp"
#include "stagg/model.hpp"

namespace stagg::features {

inline constexpr std::size_t kDefaultFactorRank = 5;

struct FeatureOptions {
  std::size_t factor_rank = kDefaultFactorRank;
  std::uint64_t seed = 1;
  std::size_t cp_max_sweeps = 50;
  double cp_tol = 1e-6;
  /// Ablation: omit the per-input singular values from MF (dimension 2pm).
  bool drop_singular_values = false;
  /// Per-query min-max scaling of every feature column to [0, 1].
  bool minmax = false;
};

/// Row-major n x d feature table.
struct FeatureTable {
  MappingKind kind = MappingKind::bf;
  std::size_t factor_rank = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t items() const noexcept { return dim ? values.size() / dim : 0; }
  std::span<const double> row(ItemId j) const { return {values.data() + j * dim, dim}; }
};

/// P[a][b] = +1 if a is ranked above b, -1 if below, 0 if either is absent.
linalg::Matrix preference_matrix(const PartialRanking& tau);

/// (n - pos) / n for present items, 0 for absent ones.
double normalized_borda(const PartialRanking& tau, ItemId j);

FeatureTable map_features(const QueryInstance& q, MappingKind kind,
                          const FeatureOptions& options = {});

/// `qid,docid,f1,...,fd` rows.
std::string features_to_csv(const QueryInstance& q, const FeatureTable& table,
                            bool with_header = true);

}  // namespace stagg::features
