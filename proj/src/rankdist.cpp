// SPDX-License-Identifier: Apache-2.0
#include "stagg/rankdist.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stagg/errors.hpp"
#include "stagg/simd/kernels.hpp"

namespace stagg::rankdist {
namespace {

void check_prob(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("contest probability outside [0,1]");
}

std::vector<double> collect(const PairwiseProbFn& prob, ItemId j, std::span<const ItemId> others) {
  std::vector<double> probs;
  probs.reserve(others.size());
  for (ItemId i : others) {
    if (i == j) throw InvalidArgument("item listed among its own opponents");
    const double p = prob(i, j);
    check_prob(p);
    probs.push_back(p);
  }
  return probs;
}

double unsup_from_positions(double pos_i, double pos_j, double denom) {
  const double base = std::abs(pos_i - pos_j) / denom;
  if (pos_i > pos_j) return std::min(base, 1.0 - base);
  return std::max(base, 1.0 - base);
}

}  // namespace

double RankDistribution::mean() const {
  double acc = 0.0;
  for (std::size_t r = 0; r < mass.size(); ++r) acc += static_cast<double>(r) * mass[r];
  return acc;
}

double RankDistribution::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

double pairwise_prob_unsup(const PartialRanking& tau, std::size_t n, ItemId i, ItemId j,
                           const UnsupervisedOptions& options) {
  if (i == j) throw InvalidArgument("pairwise probability needs two distinct items");
  if (n < 2) throw InvalidArgument("pairwise probability needs n >= 2");
  const auto pi = tau.position(i);
  const auto pj = tau.position(j);
  if (!pi || !pj) return 0.5;
  const double denom = options.denominator == Denominator::query_size
                           ? static_cast<double>(n)
                           : static_cast<double>(tau.size());
  return unsup_from_positions(*pi, *pj, denom);
}

std::vector<double> contest_probs_unsup(const PartialRanking& tau, ItemId j,
                                        const UnsupervisedOptions& options) {
  const std::size_t n = tau.item_count();
  std::vector<double> probs;
  probs.reserve(n > 0 ? n - 1 : 0);
  const auto pj = tau.position(j);
  const double denom = options.denominator == Denominator::query_size
                           ? static_cast<double>(n)
                           : static_cast<double>(tau.size());
  for (ItemId i = 0; i < n; ++i) {
    if (i == j) continue;
    const auto pi = tau.position(i);
    probs.push_back(pi && pj ? unsup_from_positions(*pi, *pj, denom) : 0.5);
  }
  return probs;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double pairwise_prob_sup(std::span<const double> scores, double sigma, ItemId i, ItemId j) {
  if (i == j) throw InvalidArgument("pairwise probability needs two distinct items");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const double fi = scores[i];
  const double fj = scores[j];
  if (!std::isfinite(fi) || !std::isfinite(fj)) throw InvalidArgument("non-finite score");
  // Phi(d / (sigma sqrt2)) = erfc(-d / (2 sigma)) / 2
  return 0.5 * std::erfc(-(fi - fj) / (2.0 * sigma));
}

RankDistribution poisson_binomial(std::span<const double> probs) {
  const std::size_t t = probs.size();
  std::vector<double> cur(t + 1, 0.0);
  std::vector<double> next(t + 1, 0.0);
  cur[0] = 1.0;
  const auto& k = simd::active_kernels();
  for (std::size_t step = 0; step < t; ++step) {
    check_prob(probs[step]);
    k.bernoulli_convolve(cur.data(), next.data(), step + 1, probs[step]);
    std::swap(cur, next);
  }
  return {std::move(cur)};
}

RankDistribution discretized_normal(double mean, double variance, std::size_t support) {
  if (support == 0) throw InvalidArgument("empty support");
  const double var = std::max(variance, kVarianceFloor);
  std::vector<double> mass(support);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < support; ++r) {
    const double d = static_cast<double>(r) - mean;
    mass[r] = -d * d / (2.0 * var);
    peak = std::max(peak, mass[r]);
  }
  double z = 0.0;
  for (double& e : mass) {
    e = std::exp(e - peak);
    z += e;
  }
  for (double& e : mass) e /= z;
  return {std::move(mass)};
}

RankDistribution normal_approximation(std::span<const double> probs) {
  double mu = 0.0;
  double var = 0.0;
  for (double p : probs) {
    check_prob(p);
    mu += p;
    var += p * (1.0 - p);
  }
  return discretized_normal(mu, var, probs.size() + 1);
}

RankDistribution rank_distribution_dp(const PairwiseProbFn& prob, ItemId j,
                                      std::span<const ItemId> others) {
  return poisson_binomial(collect(prob, j, others));
}

double rank_mean(const PairwiseProbFn& prob, ItemId j, std::span<const ItemId> others) {
  const auto probs = collect(prob, j, others);
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

RankDistribution rank_distribution_normal(const PairwiseProbFn& prob, ItemId j,
                                          std::span<const ItemId> others) {
  if (others.empty()) throw InvalidArgument("normal approximation needs at least one opponent");
  return normal_approximation(collect(prob, j, others));
}

RankDistribution brute_force_rank_distribution(const PairwiseProbFn& prob, ItemId j,
                                               std::span<const ItemId> others) {
  if (others.size() > kBruteForceLimit)
    throw InvalidArgument("too many opponents for enumeration");
  const auto probs = collect(prob, j, others);
  const std::size_t t = probs.size();
  std::vector<double> mass(t + 1, 0.0);
  for (std::uint64_t outcome = 0; outcome < (std::uint64_t{1} << t); ++outcome) {
    double weight = 1.0;
    for (std::size_t i = 0; i < t; ++i)
      weight *= (outcome >> i) & 1u ? probs[i] : 1.0 - probs[i];
    mass[static_cast<std::size_t>(std::popcount(outcome))] += weight;
  }
  return {std::move(mass)};
}

}  // namespace stagg::rankdist
