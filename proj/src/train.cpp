// SPDX-License-Identifier: Apache-2.0
#include "stagg/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "stagg/errors.hpp"
#include "stagg/parallel.hpp"
#include "stagg/rankdist.hpp"
#include "stagg/simd/kernels.hpp"

namespace stagg::train {
namespace {

// Pairwise contest probabilities p(i beats j) and their score derivative
// dp/ds_i, both n x n row-major with rows indexed by i.
struct Contests {
  std::size_t n = 0;
  std::vector<double> prob;
  std::vector<double> density;

  double p(ItemId i, ItemId j) const { return prob[i * n + j]; }
  double d(ItemId i, ItemId j) const { return density[i * n + j]; }
};

Contests pairwise_contests(std::span<const double> scores, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  for (double s : scores)
    if (!std::isfinite(s)) throw InvalidArgument("non-finite score");
  const std::size_t n = scores.size();
  Contests c{n, std::vector<double>(n * n, 0.0), std::vector<double>(n * n, 0.0)};
  const double scale = sigma * std::numbers::sqrt2;
  for (ItemId i = 0; i < n; ++i)
    for (ItemId j = i + 1; j < n; ++j) {
      const double diff = scores[i] - scores[j];
      c.prob[i * n + j] = 0.5 * std::erfc(-diff / (2.0 * sigma));
      c.prob[j * n + i] = 0.5 * std::erfc(diff / (2.0 * sigma));
      const double dens = rankdist::normal_pdf(diff / scale) / scale;
      c.density[i * n + j] = dens;
      c.density[j * n + i] = dens;
    }
  return c;
}

// coef[j * n + r] = d objective / d P(R_j = r). `constant` is added to the
// objective (used for the all-zero-gain NDCG convention).
struct Coefficients {
  std::vector<double> coef;
  double constant = 0.0;
};

Coefficients objective_coefficients(const QueryInstance& q, std::span<const double> scores,
                                    const Objective& obj) {
  if (!q.labels) throw InvalidArgument("query " + q.query_id + " has no relevance labels");
  const auto& y = *q.labels;
  const std::size_t n = q.n();
  Coefficients out{std::vector<double>(n * n, 0.0), 0.0};
  switch (obj.kind) {
    case ObjectiveKind::ndcg: {
      const double ideal = metrics::ideal_dcg(y, 0);
      if (ideal <= 0.0) {
        out.constant = 1.0;
        break;
      }
      for (ItemId j = 0; j < n; ++j) {
        const double g = metrics::gain(y[j]) / ideal;
        for (std::size_t r = 0; r < n; ++r) out.coef[j * n + r] = g * metrics::discount(r + 1);
      }
      break;
    }
    case ObjectiveKind::rbp: {
      if (!(obj.rbp_p >= 0.0 && obj.rbp_p <= 1.0)) throw InvalidArgument("rbp p outside [0,1]");
      for (ItemId j = 0; j < n; ++j) {
        double weight = (1.0 - obj.rbp_p) * y[j];
        for (std::size_t r = 0; r < n; ++r) {
          out.coef[j * n + r] = weight;
          weight *= obj.rbp_p;
        }
      }
      break;
    }
    case ObjectiveKind::err: {
      for (int label : y)
        if (label > obj.y_max) throw InvalidArgument("label exceeds y_max");
      const auto reference = order_by_scores(scores);
      for (ItemId j = 0; j < n; ++j) {
        const double stop = metrics::satisfaction(y[j], obj.y_max);
        double reach = 1.0;
        std::size_t r = 0;
        out.coef[j * n] = stop;
        for (ItemId t : reference) {
          if (t == j) continue;
          if (++r >= n) break;
          reach *= 1.0 - metrics::satisfaction(y[t], obj.y_max);
          out.coef[j * n + r] = stop * reach / static_cast<double>(r + 1);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<double> score_items(const features::FeatureTable& features,
                                std::span<const double> w) {
  if (w.size() != features.dim)
    throw InvalidArgument("weight dimension " + std::to_string(w.size()) +
                          " != feature dimension " + std::to_string(features.dim));
  const auto& k = simd::active_kernels();
  std::vector<double> s(features.items());
  for (ItemId j = 0; j < s.size(); ++j) s[j] = k.dot(features.row(j).data(), w.data(), w.size());
  return s;
}

QueryEvaluation evaluate_query(const QueryInstance& q, std::span<const double> scores,
                               double sigma, const Objective& objective, bool with_gradient) {
  const std::size_t n = q.n();
  if (scores.size() != n) throw InvalidArgument("score vector size != item count");
  const Contests contests = pairwise_contests(scores, sigma);
  const Coefficients c = objective_coefficients(q, scores, objective);

  QueryEvaluation out;
  out.value = c.constant;
  if (with_gradient) out.score_gradient.assign(n, 0.0);

  for (ItemId j = 0; j < n; ++j) {
    double mu = 0.0;
    double var = 0.0;
    for (ItemId i = 0; i < n; ++i) {
      if (i == j) continue;
      mu += contests.p(i, j);
      var += contests.p(i, j) * contests.p(j, i);
    }
    const std::span<const double> coef(c.coef.data() + j * n, n);
    if (n == 1) {
      out.value += coef[0];
      continue;
    }
    const auto pmf = rankdist::discretized_normal(mu, var, n);
    double expected = 0.0;
    for (std::size_t r = 0; r < n; ++r) expected += coef[r] * pmf[r];
    out.value += expected;
    if (!with_gradient) continue;

    // d log q(r) / d mu = (r - mu) / v,  d log q(r) / d v = (r - mu)^2 / (2 v^2);
    // the normalisation contributes the centring terms.
    const bool clamped = var < rankdist::kVarianceFloor;
    const double v = std::max(var, rankdist::kVarianceFloor);
    double pa = 0.0, cpa = 0.0, pb = 0.0, cpb = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double dr = static_cast<double>(r) - mu;
      const double a = dr / v;
      const double b = dr * dr / (2.0 * v * v);
      pa += pmf[r] * a;
      cpa += coef[r] * pmf[r] * a;
      pb += pmf[r] * b;
      cpb += coef[r] * pmf[r] * b;
    }
    const double grad_mu = cpa - expected * pa;
    const double grad_var = clamped ? 0.0 : cpb - expected * pb;
    if (grad_mu == 0.0 && grad_var == 0.0) continue;
    for (ItemId i = 0; i < n; ++i) {
      if (i == j) continue;
      // mu_j and var_j depend on s_i and s_j through p(i beats j).
      const double dp = contests.d(i, j);
      const double g = (grad_mu + grad_var * (1.0 - 2.0 * contests.p(i, j))) * dp;
      out.score_gradient[i] += g;
      out.score_gradient[j] -= g;
    }
  }
  return out;
}

double expected_objective(const QueryInstance& q, std::span<const double> scores, double sigma,
                          const Objective& objective) {
  return evaluate_query(q, scores, sigma, objective, false).value;
}

double expected_objective_exact(const QueryInstance& q, std::span<const double> scores,
                                double sigma, const Objective& objective) {
  const std::size_t n = q.n();
  if (scores.size() != n) throw InvalidArgument("score vector size != item count");
  const Contests contests = pairwise_contests(scores, sigma);
  const Coefficients c = objective_coefficients(q, scores, objective);
  double value = c.constant;
  std::vector<double> probs;
  for (ItemId j = 0; j < n; ++j) {
    probs.clear();
    for (ItemId i = 0; i < n; ++i)
      if (i != j) probs.push_back(contests.p(i, j));
    const auto pmf = rankdist::poisson_binomial(probs);
    for (std::size_t r = 0; r < n; ++r) value += c.coef[j * n + r] * pmf[r];
  }
  return value;
}

std::vector<double> objective_gradient(const QueryInstance& q,
                                       const features::FeatureTable& features,
                                       std::span<const double> w, double sigma,
                                       const Objective& objective) {
  const auto scores = score_items(features, w);
  const auto eval = evaluate_query(q, scores, sigma, objective, true);
  std::vector<double> grad(features.dim, 0.0);
  const auto& k = simd::active_kernels();
  for (ItemId j = 0; j < scores.size(); ++j)
    if (eval.score_gradient[j] != 0.0)
      k.axpy(eval.score_gradient[j], features.row(j).data(), grad.data(), grad.size());
  return grad;
}

namespace {

struct PreparedQuery {
  const QueryInstance* query;
  features::FeatureTable features;
};

std::vector<PreparedQuery> prepare(std::span<const QueryInstance> set, MappingKind mapping,
                                   const features::FeatureOptions& options, std::size_t threads) {
  std::vector<PreparedQuery> out(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    if (!set[i].labels)
      throw InvalidArgument("query " + set[i].query_id + " has no relevance labels");
    out[i] = {&set[i], features::map_features(set[i], mapping, options)};
  });
  return out;
}

struct BatchResult {
  double objective;
  std::vector<double> gradient;
};

BatchResult batch_objective(const std::vector<PreparedQuery>& set, std::span<const double> w,
                            double sigma, const Objective& obj, bool with_gradient,
                            std::size_t threads) {
  std::vector<QueryEvaluation> evals(set.size());
  std::vector<std::vector<double>> scores(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    scores[i] = score_items(set[i].features, w);
    evals[i] = evaluate_query(*set[i].query, scores[i], sigma, obj, with_gradient);
  });
  // Fixed-order reduction keeps results independent of the thread count.
  BatchResult out{0.0, std::vector<double>(w.size(), 0.0)};
  const auto& k = simd::active_kernels();
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.objective += evals[i].value;
    if (!with_gradient) continue;
    for (ItemId j = 0; j < scores[i].size(); ++j)
      if (evals[i].score_gradient[j] != 0.0)
        k.axpy(evals[i].score_gradient[j], set[i].features.row(j).data(), out.gradient.data(),
               w.size());
  }
  const double inv = 1.0 / static_cast<double>(set.size());
  out.objective *= inv;
  for (double& g : out.gradient) g *= inv;
  return out;
}

double mean_metric(const std::vector<PreparedQuery>& set, std::span<const double> w,
                   const metrics::MetricSpec& spec) {
  double total = 0.0;
  for (const auto& pq : set) {
    const auto order = order_by_scores(score_items(pq.features, w));
    total += metrics::evaluate(order, *pq.query->labels, spec);
  }
  return total / static_cast<double>(set.size());
}

std::size_t common_input_count(std::span<const QueryInstance> set) {
  const std::size_t m = set.front().m();
  for (const auto& q : set)
    if (q.m() != m)
      throw InvalidArgument("query " + q.query_id + " has " + std::to_string(q.m()) +
                            " ranking inputs, expected " + std::to_string(m));
  return m;
}

}  // namespace

FitResult fit(std::span<const QueryInstance> train_set, std::span<const QueryInstance> valid_set,
              const TrainConfig& config) {
  if (train_set.empty()) throw InvalidArgument("empty training set");
  if (valid_set.empty()) throw InvalidArgument("empty validation set");
  if (config.learning_rate_grid.empty() || config.sigma_grid.empty())
    throw InvalidArgument("empty hyper-parameter grid");
  for (double lr : config.learning_rate_grid)
    if (!(lr > 0.0)) throw InvalidArgument("learning rates must be positive");
  for (double s : config.sigma_grid)
    if (!(s > 0.0)) throw InvalidArgument("sigma values must be positive");

  const std::size_t m = common_input_count(train_set);
  if (config.mapping != MappingKind::tf && common_input_count(valid_set) != m)
    throw InvalidArgument("validation queries have a different input count than training");

  features::FeatureOptions fopts;
  fopts.factor_rank = config.factor_rank;
  fopts.seed = config.seed;
  const auto train = prepare(train_set, config.mapping, fopts, config.threads);
  const auto valid = prepare(valid_set, config.mapping, fopts, config.threads);
  const std::size_t dim = train.front().features.dim;

  FitResult result;
  result.model.weights.assign(dim, 0.0);
  result.model.sigma = config.sigma_grid.front();
  result.model.mapping = config.mapping;
  result.model.factor_rank = config.factor_rank;
  result.model.objective = config.objective.kind;
  result.model.rbp_p = config.objective.rbp_p;
  result.model.y_max = config.objective.y_max;
  result.model.num_inputs = m;
  result.model.seed = config.seed;
  result.best_learning_rate = config.learning_rate_grid.front();
  bool have_best = false;

  for (double lr : config.learning_rate_grid) {
    for (double sigma : config.sigma_grid) {
      std::vector<double> w(dim, 0.0);
      for (std::size_t it = 0; it <= config.max_iterations; ++it) {
        const bool step = it < config.max_iterations;
        const auto batch = batch_objective(train, w, sigma, config.objective, step, config.threads);
        if (!std::isfinite(batch.objective)) {
          result.log.push_back({lr, sigma, it, batch.objective, std::nan("")});
          break;
        }
        const double valid_metric = mean_metric(valid, w, config.selection);
        result.log.push_back({lr, sigma, it, batch.objective, valid_metric});
        if (!have_best || valid_metric > result.best_valid_metric) {
          have_best = true;
          result.best_valid_metric = valid_metric;
          result.best_learning_rate = lr;
          result.best_iteration = it;
          result.model.weights = w;
          result.model.sigma = sigma;
        }
        if (!step) break;
        simd::axpy(lr, batch.gradient, w);
      }
    }
  }
  return result;
}

std::string log_to_csv(const std::vector<LogRow>& log) {
  std::string out = "grid_lr,grid_sigma,iteration,train_objective,valid_metric\n";
  char buf[160];
  for (const auto& row : log) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%zu,%.10g,%.10g\n", row.learning_rate, row.sigma,
                  row.iteration, row.train_objective, row.valid_metric);
    out += buf;
  }
  return out;
}

features::FeatureOptions feature_options(const AggregationModel& model) {
  features::FeatureOptions opts;
  opts.factor_rank = model.factor_rank;
  opts.seed = model.seed;
  return opts;
}

QueryRun predict(const AggregationModel& model, const QueryInstance& q) {
  const auto table = features::map_features(q, model.mapping, feature_options(model));
  if (table.dim != model.weights.size())
    throw InvalidArgument("query " + q.query_id + ": feature dimension " +
                          std::to_string(table.dim) + " != model dimension " +
                          std::to_string(model.weights.size()));
  return rank_by_scores(q, score_items(table, model.weights));
}

AggregateRun predict(const AggregationModel& model, std::span<const QueryInstance> instances,
                     std::size_t threads) {
  AggregateRun run(instances.size());
  parallel_for(instances.size(), threads,
               [&](std::size_t i) { run[i] = predict(model, instances[i]); });
  return run;
}

}  // namespace stagg::train
