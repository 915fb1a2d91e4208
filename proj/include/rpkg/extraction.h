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

#ifndef RPKG_EXTRACTION_H_
#define RPKG_EXTRACTION_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rpkg/corpus.h"
#include "rpkg/pos_tagger.h"

namespace rpkg {

enum class Category { kMeta, kDescription, kMessage, kFunction };

// "meta", "description", "message", "function".
std::string_view category_name(Category c);
// Graph/query form: "meta package", "message package", ...
std::string category_label(Category c);
// Accepts both forms, case-insensitively.
std::optional<Category> parse_category(std::string_view s);

struct CodeFeatures {
  std::set<std::string> nodes;
  std::set<std::string> services;
  std::set<std::string> messages;
  std::set<std::string> actions;
  std::set<std::string> launches;

  bool operator==(const CodeFeatures &) const = default;
};

struct HardwareMatch {
  std::string canonical_name;
  HardwareKind kind = HardwareKind::kRobot;
  int score = 0;

  bool operator==(const HardwareMatch &) const = default;
};

// The ten-dimension feature bundle of one package.
struct PackageFeatures {
  std::string package;
  std::set<std::string> robots;
  std::set<std::string> sensors;
  Category category = Category::kFunction;
  std::set<std::string> functions;
  std::set<std::string> characteristics;
  CodeFeatures code;

  bool operator==(const PackageFeatures &) const = default;
};

// Category rules, first hit wins:
//   1. only top-level package.xml and CMakeLists.txt  -> meta
//   2. a "meshes" or "robots" directory anywhere      -> description
//   3. a "msg" directory anywhere                     -> message
//   4. otherwise                                      -> function
Category classify_category(const std::set<std::string> &files);

CodeFeatures extract_code_features(const std::set<std::string> &files);

// First argument of every add_executable(...) call. ${PROJECT_NAME} is
// replaced by the package name; names with other unresolved variables are
// skipped. Comments are ignored.
std::set<std::string> extract_nodes_from_cmake(std::string_view cmake_text,
                                               std::string_view package_name);

// Fuzzy-matches the package name's first '_'-separated word against every
// alias in the vocabulary. Returns the best entry if it scores at least
// kHardwareMatchThreshold. Ties prefer robots, then the smaller canonical
// name.
std::optional<HardwareMatch> match_hardware(std::string_view package_name,
                                            const HardwareVocabulary &vocab);

// Splits on '.', '!' and '?'; empty pieces are dropped.
std::vector<std::string> split_sentences(std::string_view text);

// Runs every extractor over one record. Phrases are de-duplicated
// case-insensitively, keeping the first spelling seen.
PackageFeatures extract_all(const PackageRecord &record,
                            const HardwareVocabulary &vocab,
                            const Tagger &tagger = RuleTagger());

// Extracts all records, sorted by package name.
std::vector<PackageFeatures> extract_corpus(
    const std::vector<PackageRecord> &records, const HardwareVocabulary &vocab,
    const Tagger &tagger = RuleTagger());

// Line-delimited JSON, one package per line, arrays sorted.
std::string format_features(const std::vector<PackageFeatures> &features);
std::vector<PackageFeatures> parse_features(std::string_view text);
void write_features(const std::vector<PackageFeatures> &features,
                    const std::filesystem::path &path);

}  // namespace rpkg

#endif  // RPKG_EXTRACTION_H_
