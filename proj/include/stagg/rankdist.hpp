// SPDX-License-Identifier: Apache-2.0
#pragma once

// Rank distributions from pairwise contests. The rank of item j is the number
// of opponents that beat it, a sum of independent Bernoulli trials, so its
// law is Poisson-binomial. Rank 0 is best.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stagg/model.hpp"

namespace stagg::rankdist {

/// Probability that item i beats item j.
using PairwiseProbFn = std::function<double(ItemId i, ItemId j)>;

/// PMF over ranks 0..size()-1.
struct RankDistribution {
  std::vector<double> mass;

  std::size_t size() const noexcept { return mass.size(); }
  double operator[](std::size_t r) const { return mass[r]; }
  double mean() const;
  double total() const;
};

/// Denominator of the rank-difference base probability |pos_i - pos_j| / n.
enum class Denominator {
  query_size,  // n of the query
  input_size,  // k, the number of items present in the input
};

struct UnsupervisedOptions {
  Denominator denominator = Denominator::query_size;
};

/// Variance floor of the normal approximation.
inline constexpr double kVarianceFloor = 1e-6;
/// Largest opponent count accepted by the enumeration oracle.
inline constexpr std::size_t kBruteForceLimit = 20;

/// p(i beats j) given one ranking input: the item placed lower is the
/// underdog, min{p, 1-p}, with p = |pos_i - pos_j| / n; 0.5 if either is absent.
double pairwise_prob_unsup(const PartialRanking& tau, std::size_t n, ItemId i, ItemId j,
                           const UnsupervisedOptions& options = {});

/// p(i beats j) for every opponent i != j, in ascending id order.
std::vector<double> contest_probs_unsup(const PartialRanking& tau, ItemId j,
                                        const UnsupervisedOptions& options = {});

/// P(s_i > s_j) with s ~ N(score, sigma^2) independently: Phi((f_i - f_j) / (sigma*sqrt 2)).
double pairwise_prob_sup(std::span<const double> scores, double sigma, ItemId i, ItemId j);

double normal_cdf(double x);
double normal_pdf(double x);

/// Exact Poisson-binomial PMF by the add-one-opponent recursion.
RankDistribution poisson_binomial(std::span<const double> probs);

/// Discretised normal on ranks 0..support-1, renormalised; the variance is
/// clamped below at kVarianceFloor.
RankDistribution discretized_normal(double mean, double variance, std::size_t support);

/// Normal approximation with mean sum(p) and variance sum(p(1-p)).
RankDistribution normal_approximation(std::span<const double> probs);

RankDistribution rank_distribution_dp(const PairwiseProbFn& prob, ItemId j,
                                      std::span<const ItemId> others);

double rank_mean(const PairwiseProbFn& prob, ItemId j, std::span<const ItemId> others);

RankDistribution rank_distribution_normal(const PairwiseProbFn& prob, ItemId j,
                                          std::span<const ItemId> others);

/// Enumerates all 2^|others| contest outcomes. Test oracle; |others| <= 20.
RankDistribution brute_force_rank_distribution(const PairwiseProbFn& prob, ItemId j,
                                               std::span<const ItemId> others);

}  // namespace stagg::rankdist
