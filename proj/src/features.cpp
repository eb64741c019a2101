// SPDX-License-Identifier: Apache-2.0
#include "stagg/features.hpp"

#include <algorithm>
#include <cstdio>

#include "stagg/errors.hpp"

namespace stagg::features {

linalg::Matrix preference_matrix(const PartialRanking& tau) {
  const std::size_t n = tau.item_count();
  linalg::Matrix p(n, n);
  const auto order = tau.order();
  for (std::size_t x = 0; x < order.size(); ++x)
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      p(order[x], order[y]) = 1.0;
      p(order[y], order[x]) = -1.0;
    }
  return p;
}

double normalized_borda(const PartialRanking& tau, ItemId j) {
  const auto pos = tau.position(j);
  if (!pos) return 0.0;
  const double n = static_cast<double>(tau.item_count());
  return (n - *pos) / n;
}

namespace {

void scale_minmax(FeatureTable& table) {
  const std::size_t n = table.items();
  for (std::size_t c = 0; c < table.dim; ++c) {
    double lo = table.values[c];
    double hi = lo;
    for (std::size_t j = 0; j < n; ++j) {
      lo = std::min(lo, table.values[j * table.dim + c]);
      hi = std::max(hi, table.values[j * table.dim + c]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double& x = table.values[j * table.dim + c];
      x = hi > lo ? (x - lo) / (hi - lo) : 0.0;
    }
  }
}

}  // namespace

FeatureTable map_features(const QueryInstance& q, MappingKind kind,
                          const FeatureOptions& options) {
  q.validate();
  const std::size_t n = q.n();
  const std::size_t m = q.m();
  const std::size_t p = options.factor_rank;
  FeatureTable table;
  table.kind = kind;

  switch (kind) {
    case MappingKind::bf: {
      table.dim = m;
      table.values.resize(n * m);
      for (std::size_t i = 0; i < m; ++i)
        for (ItemId j = 0; j < n; ++j) table.values[j * m + i] = normalized_borda(q.inputs[i], j);
      break;
    }
    case MappingKind::mf: {
      if (p < 1 || p > n) throw InvalidArgument("factor rank must satisfy 1 <= p <= n");
      table.factor_rank = p;
      const std::size_t block = options.drop_singular_values ? 2 * p : 3 * p;
      table.dim = block * m;
      table.values.resize(n * table.dim);
      for (std::size_t i = 0; i < m; ++i) {
        const auto svd = linalg::truncated_svd(preference_matrix(q.inputs[i]), p);
        for (ItemId j = 0; j < n; ++j) {
          double* out = table.values.data() + j * table.dim + i * block;
          for (std::size_t c = 0; c < p; ++c) *out++ = svd.u(j, c);
          if (!options.drop_singular_values)
            for (std::size_t c = 0; c < p; ++c) *out++ = svd.singular_values[c];
          for (std::size_t c = 0; c < p; ++c) *out++ = svd.v(j, c);
        }
      }
      break;
    }
    case MappingKind::tf: {
      if (p < 1 || p > n) throw InvalidArgument("factor rank must satisfy 1 <= p <= n");
      table.factor_rank = p;
      table.dim = 2 * p;
      std::vector<linalg::Matrix> slices;
      slices.reserve(m);
      for (const auto& tau : q.inputs) slices.push_back(preference_matrix(tau));
      const auto cp = linalg::cp_als(linalg::Tensor3::from_slices(slices),
                                     {p, options.cp_max_sweeps, options.cp_tol, options.seed});
      table.values.resize(n * table.dim);
      for (ItemId j = 0; j < n; ++j) {
        double* out = table.values.data() + j * table.dim;
        for (std::size_t c = 0; c < p; ++c) *out++ = cp.u(j, c);
        for (std::size_t c = 0; c < p; ++c) *out++ = cp.v(j, c);
      }
      break;
    }
  }
  if (options.minmax) scale_minmax(table);
  return table;
}

std::string features_to_csv(const QueryInstance& q, const FeatureTable& table,
                            bool with_header) {
  std::string out;
  if (with_header) {
    out += "qid,docid";
    for (std::size_t c = 1; c <= table.dim; ++c) out += ",f" + std::to_string(c);
    out += '\n';
  }
  char buf[64];
  for (ItemId j = 0; j < table.items(); ++j) {
    out += q.query_id + "," + q.doc_names.at(j);
    for (double x : table.row(j)) {
      std::snprintf(buf, sizeof buf, ",%.10g", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace stagg::features
