// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "stagg/errors.hpp"
#include "stagg/experiments.hpp"
#include "stagg/io.hpp"
#include "stagg/metrics.hpp"
#include "stagg/parallel.hpp"
#include "stagg/train.hpp"
#include "stagg/unsup.hpp"

namespace {

using namespace stagg;

const std::vector<std::string> kMethods{"borda", "rrf", "stagg-bc", "stagg-rrf"};

void require_labels(const std::vector<QueryInstance>& data, const std::string& what) {
  for (const auto& q : data)
    if (!q.labeled())
      throw InvalidArgument(what + ": query " + q.query_id +
                            " is unlabeled (grade -1); relevance labels are required");
}

int max_label(const std::vector<QueryInstance>& data) {
  int best = -1;
  for (const auto& q : data)
    if (q.labels)
      for (int y : *q.labels) best = std::max(best, y);
  return best;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    io::write_text_file(path, text);
}

std::vector<unsup::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<unsup::Method> out;
  for (const auto& n : names) out.push_back(unsup::parse_method(n));
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"stagg: stochastic rank aggregation"};
  app.require_subcommand(1);
  std::size_t threads = default_threads();
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  std::function<void()> action;

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "run an unsupervised aggregator");
  std::string agg_method, agg_input, agg_output, agg_tag, agg_denominator = "n";
  double rrf_c = unsup::kDefaultRrfC;
  agg->add_option("--method", agg_method, "aggregator")->required()->check(CLI::IsMember(kMethods));
  agg->add_option("--input", agg_input, "aggregation data file")->required();
  agg->add_option("--output", agg_output, "TREC run file to write")->required();
  agg->add_option("--rrf-c", rrf_c, "RRF constant C")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  agg->add_option("--denominator", agg_denominator,
                  "contest probability denominator: n (query size) or k (input size)")
      ->capture_default_str()
      ->check(CLI::IsMember({"n", "k"}));
  agg->add_option("--tag", agg_tag, "run tag (default: method name)");
  agg->callback([&] {
    action = [&] {
      const auto data = io::parse_agg_file(agg_input);
      unsup::Params params;
      params.rrf_c = rrf_c;
      params.contest.denominator = agg_denominator == "k" ? rankdist::Denominator::input_size
                                                          : rankdist::Denominator::query_size;
      const auto method = unsup::parse_method(agg_method);
      const auto run = unsup::aggregate(data, method, params, threads);
      io::write_run(run, agg_output, agg_tag.empty() ? agg_method : agg_tag);
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "score a run against labeled data");
  std::string ev_run, ev_data, ev_metrics, ev_out;
  double ev_rbp_p = 0.95;
  int ev_ymax = 2;
  ev->add_option("--run", ev_run, "TREC run file")->required();
  ev->add_option("--data", ev_data, "labeled aggregation data file")->required();
  ev->add_option("--metrics", ev_metrics, "comma-separated, e.g. ndcg@5,ndcg@10,err,rbp")
      ->required();
  ev->add_option("--rbp-p", ev_rbp_p, "RBP persistence")->capture_default_str();
  ev->add_option("--ymax", ev_ymax, "maximum grade for ERR")->capture_default_str();
  ev->add_option("--out", ev_out, "CSV output (default stdout)");
  ev->callback([&] {
    action = [&] {
      const auto specs = metrics::parse_metric_list(ev_metrics, ev_rbp_p, ev_ymax);
      const auto data = io::parse_agg_file(ev_data);
      require_labels(data, "eval");
      const auto run = io::resolve_run(io::parse_run_file(ev_run), data);
      emit(metrics::evaluate_run(run, data, specs).to_csv(), ev_out);
    };
  });

  // train
  auto* tr = app.add_subcommand("train", "fit a supervised aggregation model");
  std::string tr_objective, tr_features, tr_train, tr_valid, tr_model, tr_select = "ndcg@10";
  train::TrainConfig cfg;
  double tr_rbp_p = 0.95;
  int tr_ymax = -1;
  tr->add_option("--objective", tr_objective, "ndcg, err or rbp")
      ->required()
      ->check(CLI::IsMember({"ndcg", "err", "rbp"}));
  tr->add_option("--features", tr_features, "bf, mf or tf")
      ->required()
      ->check(CLI::IsMember({"bf", "mf", "tf"}));
  tr->add_option("--rank", cfg.factor_rank, "factor rank for mf/tf")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  tr->add_option("--train", tr_train, "training data")->required();
  tr->add_option("--valid", tr_valid, "validation data")->required();
  tr->add_option("--model", tr_model, "model JSON to write; the log goes to <model>.log.csv")
      ->required();
  tr->add_option("--seed", cfg.seed, "seed")->capture_default_str();
  tr->add_option("--lr-grid", cfg.learning_rate_grid, "learning rates")
      ->delimiter(',')
      ->capture_default_str();
  tr->add_option("--sigma-grid", cfg.sigma_grid, "score noise scales")
      ->delimiter(',')
      ->capture_default_str();
  tr->add_option("--max-iters", cfg.max_iterations, "iterations per grid point")
      ->capture_default_str();
  tr->add_option("--rbp-p", tr_rbp_p, "RBP persistence")->capture_default_str();
  tr->add_option("--ymax", tr_ymax, "maximum grade (default: largest training/validation grade)");
  tr->add_option("--select-metric", tr_select, "validation metric for model selection")
      ->capture_default_str();
  tr->callback([&] {
    action = [&] {
      const auto train_set = io::parse_agg_file(tr_train);
      const auto valid_set = io::parse_agg_file(tr_valid);
      require_labels(train_set, "train");
      require_labels(valid_set, "train (validation set)");
      int ymax = tr_ymax;
      if (ymax < 0) ymax = std::max({max_label(train_set), max_label(valid_set), 0});
      if (ymax == 0 && tr_ymax < 0) ymax = 2;
      cfg.objective = {parse_objective_kind(tr_objective), tr_rbp_p, ymax};
      cfg.mapping = parse_mapping_kind(tr_features);
      cfg.selection = metrics::parse_metric(tr_select, tr_rbp_p, ymax);
      cfg.threads = threads;
      const auto result = train::fit(train_set, valid_set, cfg);
      io::save_model(result.model, tr_model);
      io::write_text_file(tr_model + ".log.csv", train::log_to_csv(result.log));
    };
  });

  // predict
  auto* pr = app.add_subcommand("predict", "rank data with a trained model");
  std::string pr_model, pr_data, pr_output, pr_tag = "stagg-supervised";
  pr->add_option("--model", pr_model, "model JSON")->required();
  pr->add_option("--data", pr_data, "aggregation data file")->required();
  pr->add_option("--output", pr_output, "TREC run file to write")->required();
  pr->add_option("--tag", pr_tag, "run tag")->capture_default_str();
  pr->callback([&] {
    action = [&] {
      const auto model = io::load_model(pr_model);
      const auto data = io::parse_agg_file(pr_data);
      io::write_run(train::predict(model, data, threads), pr_output, pr_tag);
    };
  });

  // synth
  auto* sy = app.add_subcommand("synth", "generate a seeded synthetic data set");
  experiments::SyntheticConfig syn;
  std::string sy_output;
  sy->add_option("--output", sy_output, "aggregation data file to write")->required();
  sy->add_option("--queries", syn.n_queries, "number of queries")->capture_default_str();
  sy->add_option("--items", syn.n_items, "items per query")->capture_default_str();
  sy->add_option("--inputs", syn.m_inputs, "ranking inputs per query")->capture_default_str();
  sy->add_option("--missing-rate", syn.missing_rate, "deletion probability")
      ->capture_default_str();
  sy->add_option("--noise", syn.noise, "adjacent-swap probability")->capture_default_str();
  sy->add_option("--ymax", syn.y_max, "maximum grade")->capture_default_str();
  sy->add_option("--seed", syn.seed, "seed")->capture_default_str();
  sy->callback([&] {
    action = [&] { io::write_agg_file(sy_output, experiments::generate_synthetic(syn)); };
  });

  // robustness
  auto* rb = app.add_subcommand("robustness", "sweep the number of ranking inputs");
  experiments::SweepConfig sweep;
  std::string rb_data, rb_out, rb_metric = "ndcg@5";
  std::vector<std::string> rb_methods = kMethods;
  double rb_rbp_p = 0.95;
  int rb_ymax = 2;
  rb->add_option("--data", rb_data, "labeled aggregation data file")->required();
  rb->add_option("--methods", rb_methods, "aggregators")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember(kMethods));
  rb->add_option("--sizes", sweep.sizes, "input counts")->delimiter(',')->capture_default_str();
  rb->add_option("--reps", sweep.repetitions, "repetitions per size")->capture_default_str();
  rb->add_option("--metric", rb_metric, "metric")->capture_default_str();
  rb->add_option("--seed", sweep.seed, "seed")->capture_default_str();
  rb->add_option("--rrf-c", sweep.params.rrf_c, "RRF constant C")->capture_default_str();
  rb->add_option("--rbp-p", rb_rbp_p, "RBP persistence")->capture_default_str();
  rb->add_option("--ymax", rb_ymax, "maximum grade for ERR")->capture_default_str();
  rb->add_option("--out", rb_out, "CSV output (default stdout)");
  rb->callback([&] {
    action = [&] {
      sweep.methods = parse_methods(rb_methods);
      sweep.metric = metrics::parse_metric(rb_metric, rb_rbp_p, rb_ymax);
      sweep.threads = threads;
      const auto data = io::parse_agg_file(rb_data);
      require_labels(data, "robustness");
      emit(experiments::robustness_sweep(data, sweep).to_csv(), rb_out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
