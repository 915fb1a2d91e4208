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

#include "rpkg/tag_pattern.h"

#include <stdexcept>

#include "rpkg/text.h"

namespace rpkg {

TagPattern::TagPattern(std::string_view pattern) {
  size_t i = 0;
  while (i < pattern.size()) {
    if (is_space(pattern[i])) {
      ++i;
      continue;
    }
    if (pattern[i] != '(') {
      throw std::invalid_argument("tag pattern: expected '(' at offset " +
                                  std::to_string(i));
    }
    size_t close = pattern.find(')', i);
    if (close == std::string_view::npos) {
      throw std::invalid_argument("tag pattern: unbalanced '('");
    }
    Item item;
    for (const auto &alt : split(pattern.substr(i + 1, close - i - 1), '|')) {
      if (alt.empty()) throw std::invalid_argument("tag pattern: empty alternative");
      item.alternatives.emplace_back(alt);
    }
    i = close + 1;
    char q = i < pattern.size() ? pattern[i] : ' ';
    if (q == '*' || q == '?' || q == '+') ++i;
    if (q == '+') {
      // X+ == X X*
      items_.push_back(item);
      item.repeat = Repeat::kStar;
    } else if (q == '*') {
      item.repeat = Repeat::kStar;
    } else if (q == '?') {
      item.repeat = Repeat::kOptional;
    }
    items_.push_back(std::move(item));
  }
  if (items_.empty()) throw std::invalid_argument("tag pattern: empty");
}

bool TagPattern::accepts(const Item &item, const std::string &tag) const {
  for (const auto &re : item.alternatives) {
    if (std::regex_match(tag, re)) return true;
  }
  return false;
}

std::optional<size_t> TagPattern::longest_match(
    std::span<const std::string> tags, size_t begin, size_t end) const {
  const size_t n = items_.size();
  const size_t len = end - begin;
  // reached[p][k]: the first k items can consume exactly tags[begin, begin+p).
  std::vector<std::vector<char>> reached(len + 1, std::vector<char>(n + 1, 0));
  reached[0][0] = 1;
  std::optional<size_t> best;
  for (size_t p = 0; p <= len; ++p) {
    // Epsilon moves first: skipping optional/star items stays at p.
    for (size_t k = 0; k < n; ++k) {
      if (reached[p][k] && items_[k].repeat != Repeat::kOne) reached[p][k + 1] = 1;
    }
    if (reached[p][n] && p > 0) best = begin + p;
    if (p == len) break;
    const std::string &tag = tags[begin + p];
    for (size_t k = 0; k < n; ++k) {
      if (!reached[p][k] || !accepts(items_[k], tag)) continue;
      if (items_[k].repeat == Repeat::kStar) {
        reached[p + 1][k] = 1;
      } else {
        reached[p + 1][k + 1] = 1;
      }
    }
  }
  return best;
}

std::vector<std::pair<size_t, size_t>> TagPattern::find_all(
    std::span<const std::string> tags, size_t begin, size_t end) const {
  std::vector<std::pair<size_t, size_t>> spans;
  size_t pos = begin;
  while (pos < end) {
    if (auto stop = longest_match(tags, pos, end)) {
      spans.emplace_back(pos, *stop);
      pos = *stop;
    } else {
      ++pos;
    }
  }
  return spans;
}

namespace {

std::string join_words(const TaggedSentence &sentence, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += sentence.tokens[i].word;
  }
  return out;
}

}  // namespace

PhraseSet extract_phrases(const TaggedSentence &sentence) {
  static const TagPattern function_pattern(kFunctionTagPattern);
  static const TagPattern characteristics_pattern(kCharacteristicsTagPattern);

  const std::vector<std::string> tags = sentence.tags();
  const size_t n = tags.size();
  PhraseSet out;
  std::vector<char> consumed(n, 0);

  for (auto [b, e] : function_pattern.find_all(tags, 0, n)) {
    out.functions.push_back(join_words(sentence, b, e));
    std::fill(consumed.begin() + b, consumed.begin() + e, 1);
  }
  size_t i = 0;
  while (i < n) {
    if (consumed[i]) {
      ++i;
      continue;
    }
    size_t run_end = i;
    while (run_end < n && !consumed[run_end]) ++run_end;
    for (auto [b, e] : characteristics_pattern.find_all(tags, i, run_end)) {
      out.characteristics.push_back(join_words(sentence, b, e));
    }
    i = run_end;
  }
  return out;
}

}  // namespace rpkg
