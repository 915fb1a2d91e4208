// Copyright 2026 The rpkg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rpkg/eval.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "json_util.h"
#include "rpkg/corpus.h"
#include "rpkg/error.h"
#include "rpkg/text.h"

namespace rpkg {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<LabeledQuery> parse_queries(std::string_view text) {
  std::vector<LabeledQuery> out;
  std::map<std::string, size_t> seen;
  size_t line_no = 0;
  for (const auto &raw : split(text, '\n')) {
    ++line_no;
    if (trim_view(raw).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    json obj = json::parse(raw, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw ParseError(where + "malformed JSON");
    for (const auto &item : obj.items()) {
      if (item.key() != "id" && item.key() != "query" && item.key() != "expected_package") {
        throw ParseError(where + "unknown key '" + item.key() + "'");
      }
    }
    LabeledQuery q;
    if (!obj.contains("id") || !obj["id"].is_string() || obj["id"].get<std::string>().empty()) {
      throw ParseError(where + "missing id");
    }
    q.id = obj["id"].get<std::string>();
    if (!obj.contains("expected_package") || !obj["expected_package"].is_string() ||
        trim_view(obj["expected_package"].get<std::string>()).empty()) {
      throw ParseError(where + "missing expected_package");
    }
    q.expected_package = trim(obj["expected_package"].get<std::string>());
    if (!obj.contains("query")) throw ParseError(where + "missing query");
    try {
      q.query = query_from_json(obj["query"]);
    } catch (const QueryError &e) {
      throw ParseError(where + e.what());
    }
    if (auto [it, inserted] = seen.emplace(q.id, line_no); !inserted) {
      throw ParseError(where + "duplicate id '" + q.id + "' (first on line " +
                       std::to_string(it->second) + ")");
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<LabeledQuery> load_queries(const std::filesystem::path &path) {
  return parse_queries(read_file(path));
}

AccuracyMap topk_accuracy(const std::map<std::string, std::vector<std::string>> &results,
                          const std::map<std::string, std::string> &expected,
                          const std::vector<size_t> &levels) {
  std::vector<std::optional<size_t>> ranks;
  for (const auto &[id, package] : expected) {
    auto it = results.find(id);
    if (it == results.end()) throw QueryError("no results for query '" + id + "'");
    auto pos = std::find(it->second.begin(), it->second.end(), package);
    ranks.push_back(pos == it->second.end()
                        ? std::nullopt
                        : std::optional<size_t>(static_cast<size_t>(pos - it->second.begin()) + 1));
  }
  AccuracyMap acc;
  for (size_t k : levels) {
    size_t hits = std::count_if(ranks.begin(), ranks.end(),
                                [k](const auto &r) { return r && *r <= k; });
    acc[k] = ranks.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(ranks.size());
  }
  return acc;
}

std::vector<size_t> sample_indices(size_t population, size_t count, std::uint64_t seed) {
  if (count > population) {
    throw QueryError("sample size " + std::to_string(count) + " exceeds " +
                     std::to_string(population) + " queries");
  }
  std::vector<size_t> pool(population);
  std::iota(pool.begin(), pool.end(), size_t{0});
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < count; ++i) {
    // Unbiased draw from [0, population - i) by rejection.
    const std::uint64_t span = population - i;
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    std::swap(pool[i], pool[i + static_cast<size_t>(x % span)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

EvalReport run_eval(const Graph &graph, const std::vector<LabeledQuery> &queries,
                    const std::vector<size_t> &levels, const EvalConfig &config,
                    const EmbeddingProvider &provider) {
  EvalReport report;
  report.config = config;
  report.levels = levels;
  std::sort(report.levels.begin(), report.levels.end());
  report.levels.erase(std::unique(report.levels.begin(), report.levels.end()),
                      report.levels.end());
  if (report.levels.empty() || report.levels.front() == 0) {
    throw QueryError("levels must be positive integers");
  }

  std::vector<size_t> chosen(queries.size());
  std::iota(chosen.begin(), chosen.end(), size_t{0});
  if (config.sample_size) chosen = sample_indices(queries.size(), *config.sample_size, config.seed);

  std::map<std::string, std::vector<std::string>> ranked;
  std::map<std::string, std::string> expected;
  for (size_t index : chosen) {
    const LabeledQuery &lq = queries[index];
    if (!graph.has_package(lq.expected_package)) {
      throw NotFoundError("query '" + lq.id + "' expects unknown package '" +
                          lq.expected_package + "'");
    }
    SearchQuery q = lq.query;
    if (config.ablate) q.clear(*config.ablate);

    QueryOutcome outcome;
    std::vector<std::string> names;
    if (!q.empty()) {
      auto results = ffs(graph, q, config.weights, graph.package_count(), provider);
      for (size_t i = 0; i < results.size(); ++i) {
        names.push_back(results[i].package);
        if (results[i].package == lq.expected_package) {
          outcome.rank = i + 1;
          outcome.expected_scores = results[i].per_dimension;
        }
      }
    }
    ranked[lq.id] = std::move(names);
    expected[lq.id] = lq.expected_package;
    report.per_query[lq.id] = std::move(outcome);
  }
  report.accuracy_at = topk_accuracy(ranked, expected, report.levels);
  return report;
}

namespace {

ordered_json report_to_json(const EvalReport &r) {
  ordered_json obj;
  obj["levels"] = r.levels;
  ordered_json acc = ordered_json::object();
  for (const auto &[k, v] : r.accuracy_at) acc[std::to_string(k)] = v;
  obj["accuracy_at"] = acc;
  ordered_json per_query = ordered_json::object();
  for (const auto &[id, outcome] : r.per_query) {
    ordered_json q;
    q["rank"] = outcome.rank ? ordered_json(*outcome.rank) : ordered_json("not found");
    q["expected_scores"] = scores_to_json(outcome.expected_scores);
    per_query[id] = q;
  }
  obj["per_query"] = per_query;
  ordered_json config;
  ordered_json weights = ordered_json::object();
  for (Dimension d : kAllDimensions) {
    weights[std::string(dimension_name(d))] = r.config.weights[d];
  }
  config["weights"] = weights;
  config["ablate"] = r.config.ablate ? ordered_json(dimension_name(*r.config.ablate))
                                     : ordered_json(nullptr);
  config["sample_size"] = r.config.sample_size ? ordered_json(*r.config.sample_size)
                                               : ordered_json(nullptr);
  config["seed"] = r.config.seed;
  config["sampling"] = "uniform without replacement";
  obj["config"] = config;
  return obj;
}

DimensionScores scores_from_json(const json &obj) {
  DimensionScores out;
  for (const auto &item : obj.items()) {
    auto d = parse_dimension(item.key());
    if (!d || !item.value().is_number()) throw ParseError("bad score entry '" + item.key() + "'");
    out[*d] = item.value().get<double>();
  }
  return out;
}

}  // namespace

std::string format_report(const EvalReport &report, ReportFormat format) {
  if (format == ReportFormat::kJson) return dump_json(report_to_json(report), 2) + "\n";
  std::string out = "level,accuracy\n";
  char buf[64];
  for (const auto &[k, v] : report.accuracy_at) {
    std::snprintf(buf, sizeof(buf), "%zu,%.4f\n", k, v);
    out += buf;
  }
  return out;
}

EvalReport parse_report_json(std::string_view text) {
  json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw ParseError("report is not valid JSON");
  try {
    EvalReport r;
    r.levels = obj.at("levels").get<std::vector<size_t>>();
    for (const auto &item : obj.at("accuracy_at").items()) {
      r.accuracy_at[std::stoul(item.key())] = item.value().get<double>();
    }
    for (const auto &item : obj.at("per_query").items()) {
      QueryOutcome o;
      const auto &rank = item.value().at("rank");
      if (rank.is_number_unsigned()) o.rank = rank.get<size_t>();
      o.expected_scores = scores_from_json(item.value().at("expected_scores"));
      r.per_query[item.key()] = std::move(o);
    }
    const auto &config = obj.at("config");
    for (const auto &item : config.at("weights").items()) {
      auto d = parse_dimension(item.key());
      if (!d) throw ParseError("unknown dimension '" + item.key() + "'");
      r.config.weights[*d] = item.value().get<double>();
    }
    if (!config.at("ablate").is_null()) {
      auto d = parse_dimension(config.at("ablate").get<std::string>());
      if (!d) throw ParseError("unknown ablated dimension");
      r.config.ablate = d;
    }
    if (!config.at("sample_size").is_null()) {
      r.config.sample_size = config.at("sample_size").get<size_t>();
    }
    r.config.seed = config.at("seed").get<std::uint64_t>();
    return r;
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

void write_report(const EvalReport &report, const std::filesystem::path &path,
                  ReportFormat format) {
  write_file_atomic(path, format_report(report, format));
}

}  // namespace rpkg
