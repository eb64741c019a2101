// SPDX-License-Identifier: Apache-2.0
#include "stagg/unsup.hpp"

#include <string>

#include "stagg/errors.hpp"
#include "stagg/parallel.hpp"

namespace stagg::unsup {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::borda: return "borda";
    case Method::rrf: return "rrf";
    case Method::stagg_bc: return "stagg-bc";
    case Method::stagg_rrf: return "stagg-rrf";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::borda, Method::rrf, Method::stagg_bc, Method::stagg_rrf})
    if (to_string(m) == text) return m;
  throw InvalidArgument("unknown method: " + std::string(text));
}

std::vector<double> borda_scores(const QueryInstance& q) {
  const double n = static_cast<double>(q.n());
  std::vector<double> s(q.n(), 0.0);
  for (const auto& tau : q.inputs)
    for (ItemId j = 0; j < q.n(); ++j)
      if (const auto pos = tau.position(j)) s[j] += n - *pos;
  return s;
}

std::vector<double> rrf_scores(const QueryInstance& q, double c) {
  if (!(c > 0.0)) throw InvalidArgument("RRF constant C must be positive");
  std::vector<double> s(q.n(), 0.0);
  for (const auto& tau : q.inputs)
    for (ItemId j = 0; j < q.n(); ++j)
      if (const auto pos = tau.position(j)) s[j] += 1.0 / (c + *pos);
  return s;
}

std::vector<double> expected_ranks(const PartialRanking& tau,
                                   const rankdist::UnsupervisedOptions& options) {
  const std::size_t n = tau.item_count();
  std::vector<double> e(n, 0.0);
  for (ItemId j = 0; j < n; ++j) {
    double acc = 0.0;
    for (double p : rankdist::contest_probs_unsup(tau, j, options)) acc += p;
    e[j] = acc;
  }
  return e;
}

std::vector<double> stagg_bc_scores(const QueryInstance& q,
                                    const rankdist::UnsupervisedOptions& options) {
  const double n = static_cast<double>(q.n());
  std::vector<double> s(q.n(), 0.0);
  for (const auto& tau : q.inputs) {
    const auto e = expected_ranks(tau, options);
    for (ItemId j = 0; j < q.n(); ++j) s[j] += n - e[j];
  }
  const double inv_m = 1.0 / static_cast<double>(q.m());
  for (double& v : s) v *= inv_m;
  return s;
}

std::vector<double> stagg_rrf_scores(const QueryInstance& q, double c,
                                     const rankdist::UnsupervisedOptions& options) {
  if (!(c > 0.0)) throw InvalidArgument("RRF constant C must be positive");
  std::vector<double> weight(q.n());
  for (std::size_t r = 0; r < q.n(); ++r) weight[r] = 1.0 / (static_cast<double>(r) + c);
  std::vector<double> s(q.n(), 0.0);
  for (const auto& tau : q.inputs) {
    for (ItemId j = 0; j < q.n(); ++j) {
      const auto dist = rankdist::poisson_binomial(rankdist::contest_probs_unsup(tau, j, options));
      double acc = 0.0;
      for (std::size_t r = 0; r < dist.size(); ++r) acc += dist[r] * weight[r];
      s[j] += acc;
    }
  }
  return s;
}

std::vector<double> scores(const QueryInstance& q, Method method, const Params& params) {
  q.validate();
  switch (method) {
    case Method::borda: return borda_scores(q);
    case Method::rrf: return rrf_scores(q, params.rrf_c);
    case Method::stagg_bc: return stagg_bc_scores(q, params.contest);
    case Method::stagg_rrf: return stagg_rrf_scores(q, params.rrf_c, params.contest);
  }
  throw InvalidArgument("unknown method");
}

QueryRun aggregate(const QueryInstance& q, Method method, const Params& params) {
  return rank_by_scores(q, scores(q, method, params));
}

QueryRun borda(const QueryInstance& q) { return aggregate(q, Method::borda); }
QueryRun rrf(const QueryInstance& q, double c) { return aggregate(q, Method::rrf, {c, {}}); }
QueryRun stagg_bc(const QueryInstance& q) { return aggregate(q, Method::stagg_bc); }
QueryRun stagg_rrf(const QueryInstance& q, double c) {
  return aggregate(q, Method::stagg_rrf, {c, {}});
}

AggregateRun aggregate(std::span<const QueryInstance> instances, Method method,
                       const Params& params, std::size_t threads) {
  AggregateRun run(instances.size());
  parallel_for(instances.size(), threads,
               [&](std::size_t i) { run[i] = aggregate(instances[i], method, params); });
  return run;
}

}  // namespace stagg::unsup
