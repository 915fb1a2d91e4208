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

#ifndef RPKG_SEARCH_H_
#define RPKG_SEARCH_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rpkg/embedding.h"
#include "rpkg/extraction.h"
#include "rpkg/graph.h"

namespace rpkg {

// Search dimensions in tuple order.
enum class Dimension {
  kRobot,
  kSensor,
  kCategory,
  kFunction,
  kCharacteristics,
  kAction,
  kNode,
  kService,
  kMessage,
  kLaunch,
};
inline constexpr size_t kDimensionCount = 10;
inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions = {
    Dimension::kRobot,   Dimension::kSensor,  Dimension::kCategory,
    Dimension::kFunction, Dimension::kCharacteristics, Dimension::kAction,
    Dimension::kNode,    Dimension::kService, Dimension::kMessage,
    Dimension::kLaunch};

std::string_view dimension_name(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

struct SearchQuery {
  std::optional<std::string> robot;
  std::optional<std::string> sensor;
  std::optional<std::string> category;
  std::optional<std::string> function;
  std::vector<std::string> characteristics;
  std::optional<std::string> action;
  std::optional<std::string> node;
  std::optional<std::string> service;
  std::optional<std::string> message;
  std::optional<std::string> launch;

  // The query items of one dimension; empty when the dimension is absent.
  std::vector<std::string> values(Dimension d) const;
  bool has(Dimension d) const { return !values(d).empty(); }
  bool empty() const;
  void clear(Dimension d);

  bool operator==(const SearchQuery &) const = default;
};

// One weight per dimension. Defaults: 0.8 for function and
// characteristics, 1.0 elsewhere.
struct WeightConfig {
  std::array<double, kDimensionCount> weights = {1.0, 1.0, 1.0, 0.8, 0.8,
                                                 1.0, 1.0, 1.0, 1.0, 1.0};

  double operator[](Dimension d) const { return weights[static_cast<size_t>(d)]; }
  double &operator[](Dimension d) { return weights[static_cast<size_t>(d)]; }
  WeightConfig scaled(double factor) const;
  // Throws QueryError unless every weight lies in (0, 1].
  void validate() const;

  bool operator==(const WeightConfig &) const = default;
};

using DimensionScores = std::map<Dimension, double>;

struct RankedResult {
  std::string package;
  double score = 0;
  DimensionScores per_dimension;  // query-present dimensions only
};

// max over package names of similarity_ratio / 100; 0 for an empty set.
double sim_hardware(const std::set<std::string> &package_names, std::string_view query_name);

// Mean over query phrases of the best clamped cosine against any package
// phrase; 0 if either side is empty.
double sim_semantic(const std::set<std::string> &package_phrases,
                    const std::vector<std::string> &query_phrases,
                    const EmbeddingProvider &provider);

// Fraction of query names present among the package names (trimmed,
// case-insensitive); 0 if either side is empty.
double sim_exact(const std::set<std::string> &package_names,
                 const std::vector<std::string> &query_names);

// Similarities for every dimension present in the query.
DimensionScores score_dimensions(const PackageFeatures &features, const SearchQuery &query,
                                 const EmbeddingProvider &provider);

// sum(w_k * s_k) / sum(w_k) over query-present dimensions. Weights only
// need to be positive here. Throws QueryError for an empty query.
double fuse(const DimensionScores &per_dimension, const SearchQuery &query,
            const WeightConfig &weights);

// Ranking compares scores rounded to 1e-10, so sums that are equal but
// were rounded differently still fall back to the name order.
inline constexpr double kRankQuantum = 1e10;
std::int64_t rank_key(double score);

// Scores every package, sorts by rank_key descending then name ascending,
// and returns the first k. Throws QueryError for an empty query or k == 0.
std::vector<RankedResult> ffs(const Graph &graph, const SearchQuery &query,
                              const WeightConfig &weights, size_t k,
                              const EmbeddingProvider &provider);

// Builds a query from raw field strings keyed by dimension name. Fields
// are trimmed; characteristics are split on commas; category aliases
// ("meta", "Message package", ...) become "<kind> package"; a trailing
// file extension on action/service/message/launch/node names is dropped.
// Throws QueryError for unknown keys or when every field is empty.
SearchQuery parse_query(const std::map<std::string, std::string> &fields);

}  // namespace rpkg

#endif  // RPKG_SEARCH_H_
