#pragma once

// Shared fixtures and independent oracles for the test binaries. Oracles here
// are written straight from the definitions and deliberately avoid the
// library's own helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stagg/model.hpp"

namespace testutil {

using stagg::ItemId;
using stagg::PartialRanking;
using stagg::QueryInstance;

// Four items a,b,c,d with inputs a>b, b>c, c>d.
inline QueryInstance toy_instance() {
  QueryInstance q;
  q.query_id = "1";
  q.doc_names = {"a", "b", "c", "d"};
  const std::vector<std::vector<ItemId>> orders{{0, 1}, {1, 2}, {2, 3}};
  for (const auto& o : orders) q.inputs.push_back(PartialRanking::from_order(4, o));
  q.labels = std::vector<int>{3, 2, 1, 0};
  return q;
}

inline const char* toy_agg_text() {
  return "3 qid:1 1:1 2:NULL 3:NULL #docid=a\n"
         "2 qid:1 1:2 2:1 3:NULL #docid=b\n"
         "1 qid:1 1:NULL 2:2 3:1 #docid=c\n"
         "0 qid:1 1:NULL 2:NULL 3:2 #docid=d\n";
}

inline std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back("d" + std::to_string(j));
  return out;
}

// Random partial ranking over n items; each item kept with probability keep,
// at least one item kept.
inline PartialRanking random_ranking(std::mt19937_64& g, std::size_t n, double keep) {
  std::vector<ItemId> perm(n);
  std::iota(perm.begin(), perm.end(), ItemId{0});
  std::shuffle(perm.begin(), perm.end(), g);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ItemId> kept;
  for (ItemId x : perm)
    if (u(g) < keep) kept.push_back(x);
  if (kept.empty()) kept.push_back(perm[0]);
  return PartialRanking::from_order(n, kept);
}

inline QueryInstance random_instance(std::mt19937_64& g, std::size_t n, std::size_t m,
                                     double keep, int y_max) {
  QueryInstance q;
  q.query_id = "q";
  q.doc_names = names(n);
  for (std::size_t i = 0; i < m; ++i) q.inputs.push_back(random_ranking(g, n, keep));
  std::uniform_int_distribution<int> lab(0, y_max);
  std::vector<int> labels(n);
  for (auto& y : labels) y = lab(g);
  q.labels = labels;
  return q;
}

// Exhaustive Poisson-binomial PMF: sum over all 2^k win/loss patterns.
inline std::vector<double> enumerate_pmf(const std::vector<double>& p) {
  const std::size_t k = p.size();
  std::vector<double> mass(k + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double prob = 1.0;
    std::size_t wins = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if (mask >> t & 1) {
        prob *= p[t];
        ++wins;
      } else {
        prob *= 1.0 - p[t];
      }
    }
    mass[wins] += prob;
  }
  return mass;
}

// Contest probability written from its definition.
inline double contest_oracle(const PartialRanking& tau, ItemId i, ItemId j, double denom) {
  const auto pi = tau.position(i);
  const auto pj = tau.position(j);
  if (!pi || !pj) return 0.5;
  const double p = std::abs(double(*pi) - double(*pj)) / denom;
  return *pi > *pj ? std::min(p, 1.0 - p) : std::max(p, 1.0 - p);
}

// Metrics from the textbook formulas, over an explicit label list in rank order.
inline double dcg_oracle(const std::vector<int>& ranked, std::size_t k) {
  double s = 0.0;
  for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r)
    s += (std::pow(2.0, ranked[r]) - 1.0) / std::log2(r + 2.0);
  return s;
}

inline double ndcg_oracle(std::vector<int> ranked, std::size_t k) {
  const double dcg = dcg_oracle(ranked, k);
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  const double ideal = dcg_oracle(ranked, k);
  return ideal == 0.0 ? 1.0 : dcg / ideal;
}

inline double err_oracle(const std::vector<int>& ranked, int y_max) {
  double s = 0.0, keep = 1.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const double sat = (std::pow(2.0, ranked[r]) - 1.0) / std::pow(2.0, y_max);
    s += keep * sat / double(r + 1);
    keep *= 1.0 - sat;
  }
  return s;
}

inline double rbp_oracle(const std::vector<int>& ranked, double p) {
  double s = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) s += ranked[r] * std::pow(p, double(r));
  return (1.0 - p) * s;
}

inline std::vector<ItemId> run_order(const stagg::QueryRun& run) {
  std::vector<ItemId> out;
  for (const auto& s : run.ranking) out.push_back(s.item);
  return out;
}

}  // namespace testutil
