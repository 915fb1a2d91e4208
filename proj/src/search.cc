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

#include "rpkg/search.h"

#include <algorithm>
#include <cmath>

#include "json_util.h"
#include "rpkg/error.h"
#include "rpkg/fuzzy.h"
#include "rpkg/text.h"

namespace rpkg {

namespace {

constexpr std::array<std::string_view, kDimensionCount> kDimensionNames = {
    "robot", "sensor",  "category", "function", "characteristics",
    "action", "node",   "service",  "message",  "launch"};

const std::optional<std::string> *single_field(const SearchQuery &q, Dimension d) {
  switch (d) {
    case Dimension::kRobot: return &q.robot;
    case Dimension::kSensor: return &q.sensor;
    case Dimension::kCategory: return &q.category;
    case Dimension::kFunction: return &q.function;
    case Dimension::kAction: return &q.action;
    case Dimension::kNode: return &q.node;
    case Dimension::kService: return &q.service;
    case Dimension::kMessage: return &q.message;
    case Dimension::kLaunch: return &q.launch;
    case Dimension::kCharacteristics: return nullptr;
  }
  return nullptr;
}

std::optional<std::string> *single_field(SearchQuery &q, Dimension d) {
  return const_cast<std::optional<std::string> *>(
      single_field(static_cast<const SearchQuery &>(q), d));
}

std::string_view file_extension(Dimension d) {
  switch (d) {
    case Dimension::kAction: return ".action";
    case Dimension::kNode: return ".py";
    case Dimension::kService: return ".srv";
    case Dimension::kMessage: return ".msg";
    case Dimension::kLaunch: return ".launch";
    default: return "";
  }
}

std::set<std::string> category_names(const PackageFeatures &f) {
  return {category_label(f.category)};
}

}  // namespace

std::int64_t rank_key(double score) {
  return std::llround(score * kRankQuantum);
}

std::string_view dimension_name(Dimension d) {
  return kDimensionNames[static_cast<size_t>(d)];
}

std::optional<Dimension> parse_dimension(std::string_view s) {
  for (size_t i = 0; i < kDimensionNames.size(); ++i) {
    if (kDimensionNames[i] == s) return static_cast<Dimension>(i);
  }
  return std::nullopt;
}

std::vector<std::string> SearchQuery::values(Dimension d) const {
  std::vector<std::string> out;
  if (d == Dimension::kCharacteristics) {
    for (const auto &c : characteristics) {
      std::string t = trim(c);
      if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
  }
  const auto &field = *single_field(*this, d);
  if (field) {
    std::string t = trim(*field);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

bool SearchQuery::empty() const {
  return std::none_of(kAllDimensions.begin(), kAllDimensions.end(),
                      [this](Dimension d) { return has(d); });
}

void SearchQuery::clear(Dimension d) {
  if (d == Dimension::kCharacteristics) {
    characteristics.clear();
  } else {
    single_field(*this, d)->reset();
  }
}

WeightConfig WeightConfig::scaled(double factor) const {
  WeightConfig out = *this;
  for (double &w : out.weights) w *= factor;
  return out;
}

void WeightConfig::validate() const {
  for (Dimension d : kAllDimensions) {
    double w = (*this)[d];
    if (!(w > 0.0 && w <= 1.0)) {
      throw QueryError("weight for " + std::string(dimension_name(d)) +
                       " must be in (0, 1], got " + std::to_string(w));
    }
  }
}

double sim_hardware(const std::set<std::string> &package_names, std::string_view query_name) {
  int best = 0;
  for (const auto &name : package_names) {
    best = std::max(best, similarity_ratio(name, query_name));
  }
  return package_names.empty() ? 0.0 : best / 100.0;
}

double sim_semantic(const std::set<std::string> &package_phrases,
                    const std::vector<std::string> &query_phrases,
                    const EmbeddingProvider &provider) {
  if (package_phrases.empty() || query_phrases.empty()) return 0.0;
  std::vector<std::string> package_keys;
  std::vector<EmbeddingVector> package_vectors;
  package_keys.reserve(package_phrases.size());
  package_vectors.reserve(package_phrases.size());
  for (const auto &p : package_phrases) {
    package_keys.push_back(normalize_text(p));
    package_vectors.push_back(provider.embed(p));
  }

  double total = 0.0;
  for (const auto &q : query_phrases) {
    const std::string qk = normalize_text(q);
    const EmbeddingVector qv = provider.embed(q);
    double best = 0.0;
    for (size_t i = 0; i < package_vectors.size(); ++i) {
      // Identical text is exactly 1; the computed self-cosine can be off by
      // an ulp, which would break name tie-breaks between equal scores.
      if (!qk.empty() && qk == package_keys[i] && package_vectors[i].norm() > 0) {
        best = 1.0;
        break;
      }
      best = std::max(best, std::clamp(cosine(package_vectors[i], qv), 0.0, 1.0));
    }
    total += best;
  }
  return total / static_cast<double>(query_phrases.size());
}

double sim_exact(const std::set<std::string> &package_names,
                 const std::vector<std::string> &query_names) {
  if (package_names.empty() || query_names.empty()) return 0.0;
  size_t hits = 0;
  for (const auto &q : query_names) {
    const std::string_view qt = trim_view(q);
    bool found = std::any_of(package_names.begin(), package_names.end(),
                             [qt](const std::string &p) { return iequals(trim_view(p), qt); });
    if (found) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(query_names.size());
}

DimensionScores score_dimensions(const PackageFeatures &f, const SearchQuery &query,
                                 const EmbeddingProvider &provider) {
  DimensionScores scores;
  for (Dimension d : kAllDimensions) {
    const auto items = query.values(d);
    if (items.empty()) continue;
    double s = 0.0;
    switch (d) {
      case Dimension::kRobot: s = sim_hardware(f.robots, items.front()); break;
      case Dimension::kSensor: s = sim_hardware(f.sensors, items.front()); break;
      case Dimension::kCategory: s = sim_exact(category_names(f), items); break;
      case Dimension::kFunction: s = sim_semantic(f.functions, items, provider); break;
      case Dimension::kCharacteristics:
        s = sim_semantic(f.characteristics, items, provider);
        break;
      case Dimension::kAction: s = sim_exact(f.code.actions, items); break;
      case Dimension::kNode: s = sim_exact(f.code.nodes, items); break;
      case Dimension::kService: s = sim_exact(f.code.services, items); break;
      case Dimension::kMessage: s = sim_exact(f.code.messages, items); break;
      case Dimension::kLaunch: s = sim_exact(f.code.launches, items); break;
    }
    scores[d] = s;
  }
  return scores;
}

double fuse(const DimensionScores &per_dimension, const SearchQuery &query,
            const WeightConfig &weights) {
  std::vector<double> terms;
  std::vector<double> used;
  for (Dimension d : kAllDimensions) {
    if (!query.has(d)) continue;
    auto it = per_dimension.find(d);
    const double s = it == per_dimension.end() ? 0.0 : it->second;
    terms.push_back(weights[d] * s);
    used.push_back(weights[d]);
  }
  // Summed in sorted order so equal term multisets give bit-equal scores,
  // whichever dimensions they came from.
  std::sort(terms.begin(), terms.end());
  std::sort(used.begin(), used.end());
  double weighted = 0.0;
  for (double t : terms) weighted += t;
  double total_weight = 0.0;
  for (double w : used) total_weight += w;
  if (total_weight <= 0.0) throw QueryError("query has no search dimension");
  return weighted / total_weight;
}

std::vector<RankedResult> ffs(const Graph &graph, const SearchQuery &query,
                              const WeightConfig &weights, size_t k,
                              const EmbeddingProvider &provider) {
  if (query.empty()) throw QueryError("query has no search dimension");
  if (k == 0) throw QueryError("k must be positive");

  std::vector<RankedResult> results;
  results.reserve(graph.package_count());
  for (const auto &name : graph.package_names()) {
    RankedResult r;
    r.package = name;
    r.per_dimension = score_dimensions(graph.package_view(name), query, provider);
    r.score = fuse(r.per_dimension, query, weights);
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), [](const RankedResult &a, const RankedResult &b) {
    const auto ka = rank_key(a.score);
    const auto kb = rank_key(b.score);
    if (ka != kb) return ka > kb;
    return a.package < b.package;
  });
  if (results.size() > k) results.resize(k);
  return results;
}

SearchQuery parse_query(const std::map<std::string, std::string> &fields) {
  SearchQuery q;
  for (const auto &[key, raw] : fields) {
    auto d = parse_dimension(key);
    if (!d) throw QueryError("unknown query field '" + key + "'");
    std::string value = trim(raw);
    if (*d == Dimension::kCharacteristics) {
      q.characteristics.clear();
      std::vector<std::string> seen;
      for (const auto &part : split(value, ',')) {
        std::string item = collapse_whitespace(part);
        if (item.empty()) continue;
        std::string lower = to_lower(item);
        if (std::find(seen.begin(), seen.end(), lower) != seen.end()) continue;
        seen.push_back(std::move(lower));
        q.characteristics.push_back(std::move(item));
      }
      continue;
    }
    if (value.empty()) continue;
    if (*d == Dimension::kCategory) {
      if (auto c = parse_category(value)) value = category_label(*c);
    }
    std::string_view ext = file_extension(*d);
    if (!ext.empty() && value.size() > ext.size() && iequals(std::string_view(value).substr(value.size() - ext.size()), ext)) {
      value.resize(value.size() - ext.size());
    }
    *single_field(q, *d) = std::move(value);
  }
  if (q.empty()) throw QueryError("query has no search dimension");
  return q;
}

SearchQuery query_from_json(const nlohmann::json &obj) {
  if (!obj.is_object()) throw QueryError("query must be a JSON object");
  std::map<std::string, std::string> fields;
  for (const auto &item : obj.items()) {
    const auto &v = item.value();
    if (v.is_null()) continue;
    if (item.key() == "characteristics" && v.is_array()) {
      std::string joined;
      for (const auto &c : v) {
        if (!c.is_string()) throw QueryError("characteristics must hold strings");
        if (!joined.empty()) joined += ',';
        joined += c.get<std::string>();
      }
      fields[item.key()] = joined;
    } else if (v.is_string()) {
      fields[item.key()] = v.get<std::string>();
    } else {
      throw QueryError("query field '" + item.key() + "' must be a string");
    }
  }
  return parse_query(fields);
}

nlohmann::ordered_json query_to_json(const SearchQuery &query) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (Dimension d : kAllDimensions) {
    auto items = query.values(d);
    if (items.empty()) continue;
    if (d == Dimension::kCharacteristics) {
      obj[std::string(dimension_name(d))] = items;
    } else {
      obj[std::string(dimension_name(d))] = items.front();
    }
  }
  return obj;
}

nlohmann::ordered_json scores_to_json(const DimensionScores &scores) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto &[d, s] : scores) obj[std::string(dimension_name(d))] = s;
  return obj;
}

}  // namespace rpkg
