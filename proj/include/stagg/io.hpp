// SPDX-License-Identifier: Apache-2.0
#pragma once

// File formats.
//
// Aggregation text format, one line per (query, document):
//   <grade> qid:<qid> 1:<v1> 2:<v2> ... m:<vm> #docid=<name>
// where each v is a 1-based position within that input or NULL. Grade -1
// marks an unlabeled query.
//
// TREC run format:
//   <qid> Q0 <docname> <rank> <score> <tag>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stagg/model.hpp"

namespace stagg::io {

std::vector<QueryInstance> parse_agg(std::istream& in, std::string_view source = "<stream>");
std::vector<QueryInstance> parse_agg_file(const std::filesystem::path& path);

void write_agg(std::ostream& out, const std::vector<QueryInstance>& instances);
void write_agg_file(const std::filesystem::path& path, const std::vector<QueryInstance>& instances);

void write_run(std::ostream& out, const AggregateRun& run, std::string_view run_tag);
void write_run(const AggregateRun& run, const std::filesystem::path& path,
               std::string_view run_tag);

/// One query's documents as listed in a run file, in rank order.
struct RunListing {
  std::string query_id;
  std::vector<std::string> docs;
  std::vector<double> scores;
};

std::vector<RunListing> parse_run(std::istream& in, std::string_view source = "<stream>");
std::vector<RunListing> parse_run_file(const std::filesystem::path& path);

/// Maps a run listing onto loaded instances. Throws InvalidArgument for an
/// unknown query or document.
AggregateRun resolve_run(const std::vector<RunListing>& listing,
                         const std::vector<QueryInstance>& instances);

std::string model_to_json(const AggregationModel& model);
AggregationModel model_from_json(std::string_view text, std::string_view source = "<model>");
void save_model(const AggregationModel& model, const std::filesystem::path& path);
AggregationModel load_model(const std::filesystem::path& path);

/// Whole-file helpers that throw IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace stagg::io
