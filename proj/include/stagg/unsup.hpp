// SPDX-License-Identifier: Apache-2.0
#pragma once

// Unsupervised aggregators. Borda and RRF use input positions directly; the
// stochastic variants replace each position by a rank distribution built from
// pairwise contests and score items by the expected utility.

#include <span>
#include <string_view>
#include <vector>

#include "stagg/model.hpp"
#include "stagg/rankdist.hpp"

namespace stagg::unsup {

inline constexpr double kDefaultRrfC = 40.0;

enum class Method { borda, rrf, stagg_bc, stagg_rrf };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct Params {
  double rrf_c = kDefaultRrfC;
  rankdist::UnsupervisedOptions contest{};
};

/// sum over inputs containing x of (n - pos); absent inputs add nothing.
std::vector<double> borda_scores(const QueryInstance& q);
/// sum over inputs containing x of 1 / (C + pos).
std::vector<double> rrf_scores(const QueryInstance& q, double c);
/// (1/m) sum_i (n - E[R(x, tau_i)]) using the exact mean.
std::vector<double> stagg_bc_scores(const QueryInstance& q,
                                    const rankdist::UnsupervisedOptions& options = {});
/// sum_i sum_r P(R(x, tau_i) = r) / (r + C) over the full DP distribution.
std::vector<double> stagg_rrf_scores(const QueryInstance& q, double c,
                                     const rankdist::UnsupervisedOptions& options = {});

/// Expected ranks E[R(x_j, tau)] for one input, all items.
std::vector<double> expected_ranks(const PartialRanking& tau,
                                   const rankdist::UnsupervisedOptions& options = {});

std::vector<double> scores(const QueryInstance& q, Method method, const Params& params = {});

QueryRun borda(const QueryInstance& q);
QueryRun rrf(const QueryInstance& q, double c = kDefaultRrfC);
QueryRun stagg_bc(const QueryInstance& q);
QueryRun stagg_rrf(const QueryInstance& q, double c = kDefaultRrfC);

QueryRun aggregate(const QueryInstance& q, Method method, const Params& params = {});
AggregateRun aggregate(std::span<const QueryInstance> instances, Method method,
                       const Params& params = {}, std::size_t threads = 1);

}  // namespace stagg::unsup
