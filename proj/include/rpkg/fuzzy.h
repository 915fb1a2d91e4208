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

#ifndef RPKG_FUZZY_H_
#define RPKG_FUZZY_H_

#include <cstddef>
#include <string_view>

namespace rpkg {

// Minimum fuzzy score for a hardware name to be accepted.
inline constexpr int kHardwareMatchThreshold = 90;

// Unit-cost edit distance (insert, delete, substitute) over bytes.
size_t levenshtein(std::string_view a, std::string_view b);

// Case-insensitive normalized similarity in [0, 100]:
//   round(100 * (1 - LD(a, b) / max(|a|, |b|, 1)))
// Halves round up. Returns 100 exactly when the lowercased strings match.
int similarity_ratio(std::string_view a, std::string_view b);

}  // namespace rpkg

#endif  // RPKG_FUZZY_H_
