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

#include "rpkg/fuzzy.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "rpkg/text.h"

namespace rpkg {

size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Two rows over the shorter string.
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int similarity_ratio(std::string_view a, std::string_view b) {
  const std::string la = to_lower(a);
  const std::string lb = to_lower(b);
  const size_t longest = std::max({la.size(), lb.size(), size_t{1}});
  const size_t distance = levenshtein(la, lb);
  // Integer round-half-up of 100 * (longest - distance) / longest.
  const size_t kept = longest - distance;
  return static_cast<int>((200 * kept + longest) / (2 * longest));
}

}  // namespace rpkg
