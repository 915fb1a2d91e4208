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

#include "rpkg/pos_tagger.h"

#include <cctype>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "rpkg/text.h"

namespace rpkg {

namespace {

const std::unordered_map<std::string, std::string> &closed_class() {
  static const auto *lexicon = [] {
    auto *m = new std::unordered_map<std::string, std::string>;
    for (const char *w : {"a", "an", "the", "this", "that", "these", "those",
                          "each", "every", "all", "some", "any", "no",
                          "another", "both", "either", "neither"}) {
      (*m)[w] = "DT";
    }
    for (const char *w :
         {"in", "on", "at", "for", "from", "with", "by", "of", "into", "onto",
          "over", "under", "about", "via", "through", "between", "within",
          "without", "across", "during", "after", "before", "like", "per",
          "as", "than", "upon", "among", "along", "against", "toward",
          "towards", "around", "behind", "beyond", "near", "inside",
          "outside", "since", "until", "while", "if", "because", "whether"}) {
      (*m)[w] = "IN";
    }
    for (const char *w : {"and", "or", "but", "nor", "yet"}) (*m)[w] = "CC";
    (*m)["to"] = "TO";
    for (const char *w : {"i", "you", "he", "she", "it", "we", "they", "me",
                          "him", "us", "them"}) {
      (*m)[w] = "PRP";
    }
    for (const char *w : {"its", "their", "our", "your", "my", "his", "her"}) {
      (*m)[w] = "PRP$";
    }
    for (const char *w : {"can", "could", "will", "would", "should", "may",
                          "might", "must", "shall"}) {
      (*m)[w] = "MD";
    }
    (*m)["is"] = "VBZ";
    (*m)["are"] = "VBP";
    (*m)["was"] = "VBD";
    (*m)["were"] = "VBD";
    (*m)["be"] = "VB";
    (*m)["been"] = "VBN";
    (*m)["being"] = "VBG";
    (*m)["has"] = "VBZ";
    (*m)["have"] = "VBP";
    (*m)["had"] = "VBD";
    (*m)["does"] = "VBZ";
    (*m)["do"] = "VBP";
    (*m)["not"] = "RB";
    return m;
  }();
  return *lexicon;
}

// Base forms of verbs common in package descriptions.
const std::unordered_set<std::string> &verb_lexicon() {
  static const auto *verbs = new std::unordered_set<std::string>{
      "provide",    "implement", "contain",   "output",      "start",
      "drive",      "publish",   "support",   "enable",      "use",
      "allow",      "include",   "create",    "generate",    "compute",
      "convert",    "run",       "visualize", "simulate",    "detect",
      "discover",   "synchronize", "save",    "load",        "read",
      "write",      "display",   "offer",     "define",      "estimate",
      "track",      "teleoperate", "pilot",   "open",        "install",
      "subscribe",  "receive",   "send",      "connect",     "calculate",
      "perform",    "handle",    "manage",    "build",       "bring",
      "make",       "let",       "help",      "execute",     "monitor",
      "extract",    "show",      "find",      "get",         "wrap",
      "localize",   "navigate",  "spawn",     "parse",       "serve",
      "describe",   "declare",   "communicate", "expose",    "combine",
      "add",        "take",      "integrate", "listen",      "broadcast",
  };
  return *verbs;
}

const std::unordered_set<std::string> &ing_exceptions() {
  static const auto *words = new std::unordered_set<std::string>{
      "thing", "string", "spring", "ring", "king", "something", "nothing",
      "anything", "everything", "ceiling", "bring"};
  return *words;
}

const std::unordered_set<std::string> &ly_exceptions() {
  static const auto *words = new std::unordered_set<std::string>{
      "assembly", "family", "supply", "reply", "fly", "apply", "poly",
      "anomaly", "italy", "butterfly"};
  return *words;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         (static_cast<unsigned char>(c) >= 0x80);
}

bool has_word_char(std::string_view s) {
  for (char c : s) {
    if (is_word_char(c)) return true;
  }
  return false;
}

bool is_leading_punct(char c) {
  return c == '(' || c == '[' || c == '{' || c == '"' || c == '\'';
}

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' ||
         c == '?' || c == ')' || c == ']' || c == '}' || c == '"' ||
         c == '\'';
}

std::string punctuation_tag(std::string_view tok, bool leading) {
  if (tok == "." || tok == "!" || tok == "?") return ".";
  if (tok == ",") return ",";
  if (tok == ";" || tok == ":" || tok == "-" || tok == "--") return ":";
  if (tok == "(" || tok == "[" || tok == "{") return "-LRB-";
  if (tok == ")" || tok == "]" || tok == "}") return "-RRB-";
  if (tok == "\"" || tok == "'") return leading ? "``" : "''";
  return "SYM";
}

// Returns the verb-lexicon base of a third-person singular form.
std::optional<std::string> third_person_base(const std::string &w) {
  const auto &verbs = verb_lexicon();
  if (ends_with(w, "ies") && w.size() > 3) {
    std::string base = w.substr(0, w.size() - 3) + "y";
    if (verbs.count(base)) return base;
  }
  if (ends_with(w, "es") && w.size() > 2) {
    std::string base = w.substr(0, w.size() - 2);
    if (verbs.count(base)) return base;
  }
  if (ends_with(w, "s") && w.size() > 1) {
    std::string base = w.substr(0, w.size() - 1);
    if (verbs.count(base)) return base;
  }
  return std::nullopt;
}

bool plural_like(const std::string &w) {
  return w.size() >= 3 && ends_with(w, "s") && !ends_with(w, "ss") &&
         !ends_with(w, "us") && !ends_with(w, "is");
}

std::string suffix_tag(const std::string &w) {
  if (w.size() >= 5 && ends_with(w, "ing") && !ing_exceptions().count(w)) {
    return "VBG";
  }
  if (w.size() >= 4 && ends_with(w, "ed") && !ends_with(w, "eed")) return "VBD";
  if (w.size() >= 4 && ends_with(w, "ly") && !ly_exceptions().count(w)) {
    return "RB";
  }
  if (plural_like(w)) return "NNS";
  return "NN";
}

}  // namespace

std::vector<std::string> TaggedSentence::tags() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) out.push_back(t.tag);
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) ++i;
    std::string_view chunk = sentence.substr(start, i - start);
    if (chunk.empty()) continue;

    std::vector<std::string> trailing;
    while (!chunk.empty() && has_word_char(chunk) && is_leading_punct(chunk.front())) {
      tokens.emplace_back(1, chunk.front());
      chunk.remove_prefix(1);
    }
    while (chunk.size() > 1 && is_trailing_punct(chunk.back())) {
      trailing.emplace_back(1, chunk.back());
      chunk.remove_suffix(1);
    }
    tokens.emplace_back(chunk);
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

TaggedSentence RuleTagger::tag(std::string_view sentence) const {
  TaggedSentence out;
  const auto tokens = tokenize(sentence);
  const auto &closed = closed_class();
  const auto &verbs = verb_lexicon();
  bool seen_word = false;

  for (const auto &tok : tokens) {
    std::string tag;
    const std::string lower = to_lower(tok);
    const bool initial = !seen_word;
    const std::string prev = out.tokens.empty() ? "" : out.tokens.back().tag;
    const bool noun_context = prev == "DT" || prev == "PRP$" || prev == "CD";

    if (!has_word_char(tok)) {
      tag = punctuation_tag(tok, !seen_word || prev == "-LRB-");
    } else if (tok.find('_') != std::string::npos) {
      tag = "SYM";
    } else if (auto it = closed.find(lower); it != closed.end()) {
      tag = it->second;
    } else if (std::isupper(static_cast<unsigned char>(tok[0])) && !initial) {
      tag = "NNP";
    } else if (verbs.count(lower)) {
      tag = noun_context ? "NN" : "VB";
    } else if (third_person_base(lower)) {
      tag = noun_context ? "NNS" : "VBZ";
    } else if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      tag = "CD";
    } else {
      tag = suffix_tag(lower);
    }
    if (has_word_char(tok)) seen_word = true;
    out.tokens.push_back({tok, std::move(tag)});
  }
  return out;
}

TaggedSentence pos_tag(std::string_view sentence) {
  static const RuleTagger tagger;
  return tagger.tag(sentence);
}

}  // namespace rpkg
