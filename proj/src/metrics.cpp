// SPDX-License-Identifier: Apache-2.0
#include "stagg/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <unordered_map>

#include "stagg/errors.hpp"

namespace stagg::metrics {

std::string MetricSpec::name() const {
  switch (kind) {
    case Kind::ndcg: return cutoff ? "ndcg@" + std::to_string(cutoff) : "ndcg";
    case Kind::err: return "err";
    case Kind::rbp: return "rbp";
  }
  return "?";
}

MetricSpec parse_metric(std::string_view text, double rbp_p, int y_max) {
  if (!(rbp_p >= 0.0 && rbp_p <= 1.0)) throw InvalidArgument("rbp p must lie in [0,1]");
  MetricSpec spec{Kind::ndcg, 0, rbp_p, y_max};
  if (text == "err") {
    spec.kind = Kind::err;
  } else if (text == "rbp") {
    spec.kind = Kind::rbp;
  } else if (text == "ndcg") {
    spec.kind = Kind::ndcg;
  } else if (text.starts_with("ndcg@")) {
    const std::string_view k = text.substr(5);
    const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), spec.cutoff);
    if (ec != std::errc() || ptr != k.data() + k.size())
      throw InvalidArgument("bad NDCG cutoff in '" + std::string(text) + "'");
  } else {
    throw InvalidArgument("unknown metric '" + std::string(text) + "'");
  }
  return spec;
}

std::vector<MetricSpec> parse_metric_list(std::string_view csv, double rbp_p, int y_max) {
  std::vector<MetricSpec> specs;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', start), csv.size());
    const std::string_view item = csv.substr(start, comma - start);
    if (!item.empty()) specs.push_back(parse_metric(item, rbp_p, y_max));
    start = comma + 1;
  }
  if (specs.empty()) throw InvalidArgument("empty metric list");
  return specs;
}

double gain(int label) { return std::exp2(static_cast<double>(label)) - 1.0; }

double discount(std::size_t pos) { return 1.0 / std::log2(1.0 + static_cast<double>(pos)); }

double satisfaction(int label, int y_max) {
  return gain(label) / std::exp2(static_cast<double>(y_max));
}

double ideal_dcg(std::span<const int> labels, std::size_t k) {
  std::vector<int> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t depth = k == 0 ? sorted.size() : std::min(k, sorted.size());
  double dcg = 0.0;
  for (std::size_t pos = 1; pos <= depth; ++pos) dcg += gain(sorted[pos - 1]) * discount(pos);
  return dcg;
}

double ndcg(std::span<const ItemId> ranking, std::span<const int> labels, std::size_t k) {
  const std::size_t n = labels.size();
  const std::size_t depth = k == 0 ? n : std::min(k, n);
  const double ideal = ideal_dcg(labels, depth);
  if (ideal <= 0.0) return 1.0;
  double dcg = 0.0;
  for (std::size_t pos = 1; pos <= std::min(depth, ranking.size()); ++pos)
    dcg += gain(labels[ranking[pos - 1]]) * discount(pos);
  return dcg / ideal;
}

double err(std::span<const ItemId> ranking, std::span<const int> labels, int y_max) {
  for (int y : labels)
    if (y > y_max) throw InvalidArgument("label exceeds y_max");
  double reach = 1.0;
  double total = 0.0;
  for (std::size_t pos = 1; pos <= ranking.size(); ++pos) {
    const double stop = satisfaction(labels[ranking[pos - 1]], y_max);
    total += reach * stop / static_cast<double>(pos);
    reach *= 1.0 - stop;
  }
  return total;
}

double rbp(std::span<const ItemId> ranking, std::span<const int> labels, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("rbp p must lie in [0,1]");
  double weight = 1.0;
  double total = 0.0;
  for (ItemId item : ranking) {
    total += static_cast<double>(labels[item]) * weight;
    weight *= p;
  }
  return (1.0 - p) * total;
}

double evaluate(std::span<const ItemId> ranking, std::span<const int> labels,
                const MetricSpec& spec) {
  for (ItemId item : ranking)
    if (item >= labels.size()) throw InvalidArgument("ranking references unknown item");
  switch (spec.kind) {
    case Kind::ndcg: return ndcg(ranking, labels, spec.cutoff);
    case Kind::err: return err(ranking, labels, spec.y_max);
    case Kind::rbp: return rbp(ranking, labels, spec.rbp_p);
  }
  return 0.0;
}

std::string MetricTable::to_csv() const {
  std::string out = "qid,metric,value\n";
  char buf[64];
  auto row = [&](const std::string& qid, const MetricSpec& spec, double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out += qid + "," + spec.name() + "," + buf + "\n";
  };
  for (std::size_t q = 0; q < query_ids.size(); ++q)
    for (std::size_t s = 0; s < specs.size(); ++s) row(query_ids[q], specs[s], values[q][s]);
  for (std::size_t s = 0; s < specs.size(); ++s) row("ALL", specs[s], means[s]);
  return out;
}

MetricTable evaluate_run(const AggregateRun& run, std::span<const QueryInstance> instances,
                         std::span<const MetricSpec> specs) {
  if (specs.empty()) throw InvalidArgument("no metrics requested");
  std::unordered_map<std::string, const QueryInstance*> by_qid;
  for (const auto& q : instances) by_qid.emplace(q.query_id, &q);

  MetricTable table;
  table.specs.assign(specs.begin(), specs.end());
  table.means.assign(specs.size(), 0.0);
  std::vector<ItemId> order;
  for (const auto& qr : run) {
    const auto it = by_qid.find(qr.query_id);
    if (it == by_qid.end()) throw InvalidArgument("run references unknown query " + qr.query_id);
    const QueryInstance& q = *it->second;
    if (!q.labels) throw InvalidArgument("query " + q.query_id + " has no relevance labels");
    order.clear();
    for (const auto& e : qr.ranking) {
      if (e.item >= q.n())
        throw InvalidArgument("run references unknown item in query " + q.query_id);
      order.push_back(e.item);
    }
    std::vector<double> row;
    for (const auto& spec : specs) row.push_back(evaluate(order, *q.labels, spec));
    table.query_ids.push_back(q.query_id);
    table.values.push_back(std::move(row));
  }
  if (!table.values.empty()) {
    for (const auto& row : table.values)
      for (std::size_t s = 0; s < specs.size(); ++s) table.means[s] += row[s];
    for (double& m : table.means) m /= static_cast<double>(table.values.size());
  }
  return table;
}

}  // namespace stagg::metrics
