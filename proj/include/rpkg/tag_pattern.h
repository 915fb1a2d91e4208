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

#ifndef RPKG_TAG_PATTERN_H_
#define RPKG_TAG_PATTERN_H_

#include <cstddef>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpkg/pos_tagger.h"

namespace rpkg {

// Verb phrase pattern used for function features.
inline constexpr std::string_view kFunctionTagPattern =
    "(VB.*)+ (CD)* (DT)? (CD)* (JJ)* (CD)* (VBD|VBG)* (NN.*)* (POS)* (CD)* "
    "(VBD|VBG)* (NN.*)* (VBD|VBG)* (NN.*)* (POS)* (CD)* (NN.*)+";

// Noun phrase pattern used for characteristics features.
inline constexpr std::string_view kCharacteristicsTagPattern =
    "(CD)* (DT)? (CD)* (JJ)* (CD)* (VBD|VBG)* (NN.*)* (POS)* (CD)* "
    "(VBD|VBG)* (NN.*)* (VBD|VBG)* (NN.*)* (POS)* (CD)* (NN.*)+";

// A regular expression over a sequence of POS tags. Each whitespace
// separated item is "(ALT|ALT...)" followed by an optional quantifier
// (*, + or ?); every ALT is an ECMAScript regex that must match a whole
// tag. Matching runs an NFA over token positions, so the longest match
// from a start position is found exactly.
class TagPattern {
 public:
  // Throws std::invalid_argument on syntax errors.
  explicit TagPattern(std::string_view pattern);

  // End (exclusive) of the longest non-empty match starting at `begin` and
  // not extending past `end`.
  std::optional<size_t> longest_match(std::span<const std::string> tags,
                                      size_t begin, size_t end) const;

  // Leftmost-longest, non-overlapping matches within [begin, end).
  std::vector<std::pair<size_t, size_t>> find_all(
      std::span<const std::string> tags, size_t begin, size_t end) const;

 private:
  enum class Repeat { kOne, kOptional, kStar };
  struct Item {
    std::vector<std::regex> alternatives;
    Repeat repeat = Repeat::kOne;
  };

  bool accepts(const Item &item, const std::string &tag) const;

  std::vector<Item> items_;
};

struct PhraseSet {
  std::vector<std::string> functions;
  std::vector<std::string> characteristics;
};

// Matches the function pattern first; the characteristics pattern then
// runs only over token runs the function matches did not consume. Phrases
// are the matched words joined by single spaces.
PhraseSet extract_phrases(const TaggedSentence &sentence);

}  // namespace rpkg

#endif  // RPKG_TAG_PATTERN_H_
