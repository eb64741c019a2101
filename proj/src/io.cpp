// SPDX-License-Identifier: Apache-2.0
#include "stagg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "stagg/errors.hpp"

namespace stagg::io {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_double(std::string_view text, double& out) {
  // from_chars for double is missing on older toolchains; strtod on a copy.
  std::string copy(text);
  char* end = nullptr;
  out = std::strtod(copy.c_str(), &end);
  return !copy.empty() && end == copy.c_str() + copy.size();
}

/// Query ids order numerically when both are integers, else lexically.
bool qid_less(const std::string& a, const std::string& b) {
  long long ia = 0, ib = 0;
  const bool na = parse_int(a, ia);
  const bool nb = parse_int(b, ib);
  if (na && nb) return ia != ib ? ia < ib : a < b;
  if (na != nb) return na;
  return a < b;
}

std::string_view extract_docid(std::string_view comment) {
  const std::size_t key = comment.find("docid");
  if (key == std::string_view::npos) return {};
  std::size_t i = key + 5;
  while (i < comment.size() && std::isspace(static_cast<unsigned char>(comment[i]))) ++i;
  if (i >= comment.size() || comment[i] != '=') return {};
  ++i;
  while (i < comment.size() && std::isspace(static_cast<unsigned char>(comment[i]))) ++i;
  const std::size_t start = i;
  while (i < comment.size() && !std::isspace(static_cast<unsigned char>(comment[i]))) ++i;
  return comment.substr(start, i - start);
}

struct PendingQuery {
  RawQuery raw;
  std::vector<int> grades;
  std::size_t first_line = 0;
  std::unordered_map<std::string, std::size_t> doc_index;
};

}  // namespace

std::vector<QueryInstance> parse_agg(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::map<std::string, PendingQuery, decltype(&qid_less)> pending(&qid_less);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    std::string_view comment;
    if (const std::size_t hash = view.find('#'); hash != std::string_view::npos) {
      comment = view.substr(hash + 1);
      view = view.substr(0, hash);
    }
    const auto tokens = split_ws(view);
    if (tokens.empty() && comment.empty()) continue;
    if (tokens.size() < 3)
      throw FormatError(src, line_no, "malformed line: expected grade, qid and at least one input");

    int grade = 0;
    if (!parse_int(tokens[0], grade) || grade < -1)
      throw FormatError(src, line_no, "non-integer or invalid grade '" + std::string(tokens[0]) + "'");
    if (tokens[1].substr(0, 4) != "qid:" || tokens[1].size() == 4)
      throw FormatError(src, line_no, "malformed qid token '" + std::string(tokens[1]) + "'");
    const std::string qid(tokens[1].substr(4));

    std::vector<std::optional<long>> values;
    for (std::size_t t = 2; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const std::size_t colon = tok.find(':');
      std::size_t index = 0;
      if (colon == std::string_view::npos || !parse_int(tok.substr(0, colon), index) ||
          index != t - 1)
        throw FormatError(src, line_no,
                          "malformed input column '" + std::string(tok) + "', expected " +
                              std::to_string(t - 1) + ":<position|NULL>");
      const std::string_view value = tok.substr(colon + 1);
      if (value == "NULL") {
        values.emplace_back(std::nullopt);
      } else {
        long pos = 0;
        if (!parse_int(value, pos) || pos < 1)
          throw FormatError(src, line_no, "invalid position '" + std::string(value) + "'");
        values.emplace_back(pos);
      }
    }

    const std::string_view docid = extract_docid(comment);
    if (docid.empty()) throw FormatError(src, line_no, "missing #docid=<name>");

    auto [it, inserted] = pending.try_emplace(qid);
    PendingQuery& pq = it->second;
    if (inserted) {
      pq.raw.query_id = qid;
      pq.first_line = line_no;
      pq.raw.raw_positions.resize(values.size());
    } else if (pq.raw.raw_positions.size() != values.size()) {
      throw FormatError(src, line_no,
                        "inconsistent input count for qid " + qid + ": " +
                            std::to_string(values.size()) + " vs " +
                            std::to_string(pq.raw.raw_positions.size()));
    }
    if (!pq.doc_index.emplace(std::string(docid), pq.raw.doc_keys.size()).second)
      throw FormatError(src, line_no,
                        "duplicate document " + std::string(docid) + " in qid " + qid);
    pq.raw.doc_keys.emplace_back(docid);
    pq.grades.push_back(grade);
    for (std::size_t i = 0; i < values.size(); ++i) pq.raw.raw_positions[i].push_back(values[i]);
  }
  if (in.bad()) throw IoError("read failure on " + src);

  std::vector<QueryInstance> out;
  out.reserve(pending.size());
  for (auto& [qid, pq] : pending) {
    const auto unlabeled = std::count(pq.grades.begin(), pq.grades.end(), -1);
    if (unlabeled != 0 && static_cast<std::size_t>(unlabeled) != pq.grades.size())
      throw FormatError(src, pq.first_line, "qid " + qid + " mixes grade -1 with graded documents");
    if (unlabeled == 0) pq.raw.grades = std::move(pq.grades);
    try {
      out.push_back(reindex(pq.raw));
      out.back().validate();
    } catch (const InvalidArgument& e) {
      throw FormatError(src, pq.first_line, e.what());
    }
  }
  return out;
}

std::vector<QueryInstance> parse_agg_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_agg(in, path.string());
}

void write_agg(std::ostream& out, const std::vector<QueryInstance>& instances) {
  for (const auto& q : instances) {
    for (ItemId j = 0; j < q.n(); ++j) {
      out << (q.labels ? (*q.labels)[j] : -1) << " qid:" << q.query_id;
      for (std::size_t i = 0; i < q.m(); ++i) {
        out << ' ' << (i + 1) << ':';
        if (const auto pos = q.inputs[i].position(j))
          out << *pos;
        else
          out << "NULL";
      }
      out << " #docid=" << q.doc_names[j] << '\n';
    }
  }
}

void write_agg_file(const std::filesystem::path& path, const std::vector<QueryInstance>& instances) {
  std::ostringstream out;
  write_agg(out, instances);
  write_text_file(path, out.str());
}

void write_run(std::ostream& out, const AggregateRun& run, std::string_view run_tag) {
  char score[64];
  for (const auto& query : run) {
    for (std::size_t r = 0; r < query.ranking.size(); ++r) {
      const auto& entry = query.ranking[r];
      std::snprintf(score, sizeof score, "%.6f", entry.score);
      out << query.query_id << " Q0 " << query.doc_names.at(entry.item) << ' ' << (r + 1) << ' '
          << score << ' ' << run_tag << '\n';
    }
  }
}

void write_run(const AggregateRun& run, const std::filesystem::path& path,
               std::string_view run_tag) {
  std::ostringstream out;
  write_run(out, run, run_tag);
  write_text_file(path, out.str());
}

std::vector<RunListing> parse_run(std::istream& in, std::string_view source) {
  const std::string src(source);
  struct Row {
    long rank;
    std::size_t line;
    std::string doc;
    double score;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<Row>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    long rank = 0;
    double score = 0.0;
    if (tokens.size() != 6 || !parse_int(tokens[3], rank) || !parse_double(tokens[4], score))
      throw FormatError(src, line_no, "malformed run line, expected: qid Q0 doc rank score tag");
    const std::string qid(tokens[0]);
    auto [it, inserted] = rows.try_emplace(qid);
    if (inserted) order.push_back(qid);
    it->second.push_back({rank, line_no, std::string(tokens[2]), score});
  }
  if (in.bad()) throw IoError("read failure on " + src);

  std::vector<RunListing> out;
  for (const auto& qid : order) {
    auto& list = rows[qid];
    std::stable_sort(list.begin(), list.end(),
                     [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RunListing listing{qid, {}, {}};
    for (auto& row : list) {
      listing.docs.push_back(std::move(row.doc));
      listing.scores.push_back(row.score);
    }
    out.push_back(std::move(listing));
  }
  return out;
}

std::vector<RunListing> parse_run_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_run(in, path.string());
}

AggregateRun resolve_run(const std::vector<RunListing>& listing,
                         const std::vector<QueryInstance>& instances) {
  std::unordered_map<std::string, const QueryInstance*> by_qid;
  for (const auto& q : instances) by_qid.emplace(q.query_id, &q);
  AggregateRun run;
  for (const auto& entry : listing) {
    const auto it = by_qid.find(entry.query_id);
    if (it == by_qid.end()) throw InvalidArgument("run references unknown query " + entry.query_id);
    const QueryInstance& q = *it->second;
    std::unordered_map<std::string, ItemId> ids;
    for (ItemId j = 0; j < q.n(); ++j) ids.emplace(q.doc_names[j], j);
    QueryRun qr{q.query_id, q.doc_names, {}};
    std::vector<bool> seen(q.n(), false);
    for (std::size_t r = 0; r < entry.docs.size(); ++r) {
      const auto doc = ids.find(entry.docs[r]);
      if (doc == ids.end())
        throw InvalidArgument("run references unknown document " + entry.docs[r] + " in query " +
                              q.query_id);
      if (seen[doc->second])
        throw InvalidArgument("run lists document " + entry.docs[r] + " twice in query " +
                              q.query_id);
      seen[doc->second] = true;
      qr.ranking.push_back({doc->second, entry.scores[r]});
    }
    run.push_back(std::move(qr));
  }
  return run;
}

std::string model_to_json(const AggregationModel& model) {
  nlohmann::ordered_json j;
  j["weights"] = model.weights;
  j["sigma"] = model.sigma;
  j["mapping_kind"] = std::string(to_string(model.mapping));
  j["factor_rank"] = model.factor_rank;
  j["objective_kind"] = std::string(to_string(model.objective));
  j["rbp_p"] = model.rbp_p;
  j["y_max"] = model.y_max;
  if (model.num_inputs) j["num_inputs"] = *model.num_inputs;
  j["seed"] = model.seed;
  return j.dump(2) + "\n";
}

AggregationModel model_from_json(std::string_view text, std::string_view source) {
  const std::string src(source);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(src, 0, std::string("model parse error: ") + e.what());
  }
  if (!j.is_object()) throw FormatError(src, 0, "model file must hold a JSON object");
  for (const char* key :
       {"weights", "sigma", "mapping_kind", "factor_rank", "objective_kind", "rbp_p", "y_max"})
    if (!j.contains(key)) throw FormatError(src, 0, std::string("model missing field '") + key + "'");

  AggregationModel model;
  try {
    model.weights = j.at("weights").get<std::vector<double>>();
    model.sigma = j.at("sigma").get<double>();
    model.mapping = parse_mapping_kind(j.at("mapping_kind").get<std::string>());
    model.factor_rank = j.at("factor_rank").get<std::size_t>();
    model.objective = parse_objective_kind(j.at("objective_kind").get<std::string>());
    model.rbp_p = j.at("rbp_p").get<double>();
    model.y_max = j.at("y_max").get<int>();
    if (j.contains("num_inputs")) model.num_inputs = j.at("num_inputs").get<std::size_t>();
    if (j.contains("seed")) model.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(src, 0, std::string("model field has wrong type: ") + e.what());
  }
  model.validate();
  return model;
}

void save_model(const AggregationModel& model, const std::filesystem::path& path) {
  model.validate();
  write_text_file(path, model_to_json(model));
}

AggregationModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_text_file(path), path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace stagg::io
