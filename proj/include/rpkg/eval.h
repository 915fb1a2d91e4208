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

#ifndef RPKG_EVAL_H_
#define RPKG_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpkg/graph.h"
#include "rpkg/search.h"

namespace rpkg {

struct LabeledQuery {
  std::string id;
  SearchQuery query;
  std::string expected_package;
};

// Line-delimited JSON:
//   {"id": ..., "query": {"robot": ..., "characteristics": [...], ...},
//    "expected_package": ...}
// Query fields pass through parse_query.
std::vector<LabeledQuery> parse_queries(std::string_view text);
std::vector<LabeledQuery> load_queries(const std::filesystem::path &path);

inline const std::vector<size_t> kDefaultLevels = {1, 5, 10, 15, 20};

using AccuracyMap = std::map<size_t, double>;

// accuracy[K] = share of queries whose expected package is within the
// first K names. Throws QueryError if a query id has no result list.
AccuracyMap topk_accuracy(const std::map<std::string, std::vector<std::string>> &results,
                          const std::map<std::string, std::string> &expected,
                          const std::vector<size_t> &levels);

struct QueryOutcome {
  std::optional<size_t> rank;      // 1-based; nullopt = not found
  DimensionScores expected_scores;  // per-dimension scores of the expected package
  bool operator==(const QueryOutcome &) const = default;
};

struct EvalConfig {
  WeightConfig weights;
  std::optional<Dimension> ablate;
  std::optional<size_t> sample_size;
  std::uint64_t seed = 0;
  bool operator==(const EvalConfig &) const = default;
};

struct EvalReport {
  std::vector<size_t> levels;
  AccuracyMap accuracy_at;
  std::map<std::string, QueryOutcome> per_query;
  EvalConfig config;

  bool operator==(const EvalReport &) const = default;
};

// Draws `count` distinct indices from [0, population) with a seeded
// mt19937_64 partial Fisher-Yates shuffle; the result is sorted.
std::vector<size_t> sample_indices(size_t population, size_t count, std::uint64_t seed);

// Runs every (optionally sampled) query through ffs and records the rank of
// its expected package. With `ablate` set that dimension is removed from
// each query first; queries left empty count as not found.
EvalReport run_eval(const Graph &graph, const std::vector<LabeledQuery> &queries,
                    const std::vector<size_t> &levels, const EvalConfig &config,
                    const EmbeddingProvider &provider);

enum class ReportFormat { kJson, kCsv };

std::string format_report(const EvalReport &report, ReportFormat format);
EvalReport parse_report_json(std::string_view text);
void write_report(const EvalReport &report, const std::filesystem::path &path,
                  ReportFormat format);

}  // namespace rpkg

#endif  // RPKG_EVAL_H_
