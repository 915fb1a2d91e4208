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

// JSON conversions shared by the library's persistence and service code.

#ifndef RPKG_SRC_JSON_UTIL_H_
#define RPKG_SRC_JSON_UTIL_H_

#include <string>

#include "json.hpp"
#include "rpkg/extraction.h"
#include "rpkg/search.h"

namespace rpkg {

// Serializes with invalid UTF-8 replaced by U+FFFD instead of throwing.
template <typename Json>
std::string dump_json(const Json &value, int indent = -1) {
  return value.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

nlohmann::ordered_json features_to_json(const PackageFeatures &features);
// Throws ParseError on missing or mistyped keys.
PackageFeatures features_from_json(const nlohmann::json &obj);

// Flat query object keyed by dimension name. "characteristics" may be an
// array or a comma-separated string; nulls are ignored. Throws QueryError.
SearchQuery query_from_json(const nlohmann::json &obj);
nlohmann::ordered_json query_to_json(const SearchQuery &query);

nlohmann::ordered_json scores_to_json(const DimensionScores &scores);

}  // namespace rpkg

#endif  // RPKG_SRC_JSON_UTIL_H_
