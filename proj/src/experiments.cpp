// SPDX-License-Identifier: Apache-2.0
#include "stagg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "stagg/errors.hpp"
#include "stagg/parallel.hpp"
#include "stagg/rng.hpp"

namespace stagg::experiments {

std::vector<QueryInstance> generate_synthetic(const SyntheticConfig& config) {
  if (config.n_queries < 1 || config.n_items < 1 || config.m_inputs < 1)
    throw InvalidArgument("synthetic data needs at least one query, item and input");
  if (!(config.missing_rate >= 0.0 && config.missing_rate < 1.0))
    throw InvalidArgument("missing_rate must lie in [0, 1)");
  if (!(config.noise >= 0.0 && config.noise <= 0.5))
    throw InvalidArgument("noise must lie in [0, 0.5]");
  if (config.y_max < 0) throw InvalidArgument("y_max must be >= 0");

  Rng rng(config.seed, "dataset");
  const std::size_t n = config.n_items;
  std::vector<QueryInstance> out;
  out.reserve(config.n_queries);
  for (std::size_t qi = 0; qi < config.n_queries; ++qi) {
    QueryInstance q;
    q.query_id = std::to_string(qi + 1);
    for (std::size_t j = 0; j < n; ++j) q.doc_names.push_back("d" + std::to_string(j));

    std::vector<ItemId> planted(n);
    std::iota(planted.begin(), planted.end(), ItemId{0});
    rng.shuffle(planted);
    std::vector<int> labels(n);
    const auto levels = static_cast<std::size_t>(config.y_max) + 1;
    for (std::size_t r = 0; r < n; ++r)
      labels[planted[r]] = config.y_max - static_cast<int>(r * levels / n);
    q.labels = std::move(labels);

    for (std::size_t i = 0; i < config.m_inputs; ++i) {
      std::vector<ItemId> noisy = planted;
      for (std::size_t r = 0; r + 1 < n; ++r)
        if (rng.bernoulli(config.noise)) std::swap(noisy[r], noisy[r + 1]);
      std::vector<ItemId> kept;
      for (std::size_t attempt = 0; kept.empty(); ++attempt) {
        if (attempt == kMaxEmptyInputRetries)
          throw InvalidArgument("could not draw a non-empty input; missing_rate too high");
        for (ItemId item : noisy)
          if (!rng.bernoulli(config.missing_rate)) kept.push_back(item);
      }
      q.inputs.push_back(PartialRanking::from_order(n, kept));
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Fold> kfold(std::size_t count, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k-fold needs k >= 2");
  if (count < k) throw InvalidArgument("fewer queries than folds");
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed, "folds");
  rng.shuffle(idx);

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = count / k + (f < count % k ? 1 : 0);
    folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(start),
                    idx.begin() + static_cast<std::ptrdiff_t>(start + len));
    start += len;
  }
  std::vector<Fold> out(k);
  for (std::size_t f = 0; f < k; ++f) {
    out[f].test = folds[f];
    out[f].valid = folds[(f + 1) % k];
    for (std::size_t g = 0; g < k; ++g)
      if (g != f && g != (f + 1) % k)
        out[f].train.insert(out[f].train.end(), folds[g].begin(), folds[g].end());
  }
  return out;
}

std::vector<QueryInstance> select(std::span<const QueryInstance> instances,
                                  std::span<const std::size_t> indices) {
  std::vector<QueryInstance> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(instances[i]);
  return out;
}

std::vector<QueryInstance> subsample_inputs(std::span<const QueryInstance> instances,
                                            std::size_t size, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<QueryInstance> out;
  out.reserve(instances.size());
  for (const auto& q : instances) {
    if (size < 1 || size > q.m())
      throw InvalidArgument("query " + q.query_id + " has " + std::to_string(q.m()) +
                            " inputs, cannot keep " + std::to_string(size));
    std::vector<std::size_t> idx(q.m());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx);
    idx.resize(size);
    std::sort(idx.begin(), idx.end());
    QueryInstance sub = q;
    sub.inputs.clear();
    for (std::size_t i : idx) sub.inputs.push_back(q.inputs[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

SweepResult robustness_sweep(std::span<const QueryInstance> instances, const SweepConfig& config) {
  if (instances.empty()) throw InvalidArgument("robustness sweep needs at least one query");
  if (config.methods.empty() || config.sizes.empty() || config.repetitions < 1)
    throw InvalidArgument("robustness sweep needs methods, sizes and repetitions");
  for (const auto& q : instances) {
    if (!q.labels) throw InvalidArgument("query " + q.query_id + " has no relevance labels");
    for (std::size_t s : config.sizes)
      if (s < 1 || s > q.m())
        throw InvalidArgument("size " + std::to_string(s) + " exceeds the " +
                              std::to_string(q.m()) + " inputs of query " + q.query_id);
  }

  const std::size_t reps = config.repetitions;
  const std::size_t jobs = config.sizes.size() * reps;
  // values[job][method]
  std::vector<std::vector<double>> values(jobs);
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const std::size_t size = config.sizes[job / reps];
    const std::size_t rep = job % reps;
    const auto stream = "sweep/" + std::to_string(size) + "/" + std::to_string(rep);
    const auto sub = subsample_inputs(instances, size, derive_seed(config.seed, stream));
    for (auto method : config.methods) {
      const auto run = unsup::aggregate(sub, method, config.params, 1);
      const auto table = metrics::evaluate_run(run, sub, std::span(&config.metric, 1));
      values[job].push_back(table.means[0]);
    }
  });

  SweepResult result;
  result.metric_name = config.metric.name();
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    for (std::size_t si = 0; si < config.sizes.size(); ++si) {
      double sum = 0.0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const double v = values[si * reps + rep][mi];
        result.cells.push_back({config.methods[mi], config.sizes[si], rep + 1, v});
        sum += v;
      }
      const double mean = sum / static_cast<double>(reps);
      double sq = 0.0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const double d = values[si * reps + rep][mi] - mean;
        sq += d * d;
      }
      result.summary.push_back(
          {config.methods[mi], config.sizes[si], mean, std::sqrt(sq / static_cast<double>(reps))});
    }
  }
  return result;
}

std::string SweepResult::to_csv() const {
  std::string out = "method,size,repetition,metric,value\n";
  char buf[64];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.6f", c.value);
    out += std::string(unsup::to_string(c.method)) + "," + std::to_string(c.size) + "," +
           std::to_string(c.repetition) + "," + metric_name + "," + buf + "\n";
  }
  for (const auto& s : summary) {
    const std::string prefix =
        std::string(unsup::to_string(s.method)) + "," + std::to_string(s.size) + ",ALL,";
    std::snprintf(buf, sizeof buf, "%.6f", s.mean);
    out += prefix + "mean," + buf + "\n";
    std::snprintf(buf, sizeof buf, "%.6f", s.stddev);
    out += prefix + "std," + buf + "\n";
  }
  return out;
}

const SweepSummary& SweepResult::find(unsup::Method method, std::size_t size) const {
  for (const auto& s : summary)
    if (s.method == method && s.size == size) return s;
  throw InvalidArgument("no sweep summary for requested method/size");
}

}  // namespace stagg::experiments
