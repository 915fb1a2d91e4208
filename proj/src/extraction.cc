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

#include "rpkg/extraction.h"

#include <algorithm>
#include <regex>
#include <tuple>

#include "json_util.h"
#include "rpkg/error.h"
#include "rpkg/fuzzy.h"
#include "rpkg/tag_pattern.h"
#include "rpkg/text.h"

namespace rpkg {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct SplitPath {
  std::vector<std::string> dirs;
  std::string basename;
};

SplitPath split_path(std::string_view path) {
  auto parts = split(path, '/');
  SplitPath out;
  out.basename = parts.back();
  parts.pop_back();
  for (auto &p : parts) {
    if (!p.empty() && p != ".") out.dirs.push_back(std::move(p));
  }
  return out;
}

bool has_dir(const SplitPath &p, std::string_view dir) {
  return std::find(p.dirs.begin(), p.dirs.end(), dir) != p.dirs.end();
}

// Basename without the given extension, or "" if it does not apply.
std::string stem_if(const std::string &basename, std::string_view ext) {
  if (basename.size() <= ext.size() || !ends_with(basename, ext)) return "";
  return basename.substr(0, basename.size() - ext.size());
}

std::string strip_cmake_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < text.size()) {
        out.push_back(text[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c != '#') {
      out.push_back(c);
      continue;
    }
    // Bracket comment: #[[ ... ]] or #[==[ ... ]==].
    if (i + 1 < text.size() && text[i + 1] == '[') {
      size_t j = i + 2;
      while (j < text.size() && text[j] == '=') ++j;
      if (j < text.size() && text[j] == '[') {
        std::string close = "]" + std::string(j - i - 2, '=') + "]";
        size_t end = text.find(close, j + 1);
        if (end == std::string_view::npos) return out;
        i = end + close.size() - 1;
        out.push_back(' ');
        continue;
      }
    }
    size_t eol = text.find('\n', i);
    if (eol == std::string_view::npos) return out;
    i = eol - 1;
  }
  return out;
}

void insert_unique_ci(std::vector<std::string> &seen, std::set<std::string> &out,
                      std::string phrase) {
  phrase = collapse_whitespace(phrase);
  if (phrase.empty()) return;
  std::string key = to_lower(phrase);
  if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
  seen.push_back(std::move(key));
  out.insert(std::move(phrase));
}

std::set<std::string> string_set(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'");
  if (!it->is_array()) throw ParseError(std::string("key '") + key + "' must be an array");
  std::set<std::string> out;
  for (const auto &v : *it) {
    if (!v.is_string()) throw ParseError(std::string("key '") + key + "' must hold strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kMeta: return "meta";
    case Category::kDescription: return "description";
    case Category::kMessage: return "message";
    case Category::kFunction: return "function";
  }
  return "function";
}

std::string category_label(Category c) {
  return std::string(category_name(c)) + " package";
}

std::optional<Category> parse_category(std::string_view s) {
  std::string v = collapse_whitespace(to_lower(s));
  if (ends_with(v, " package")) v.resize(v.size() - 8);
  for (Category c : {Category::kMeta, Category::kDescription, Category::kMessage,
                     Category::kFunction}) {
    if (v == category_name(c)) return c;
  }
  return std::nullopt;
}

Category classify_category(const std::set<std::string> &files) {
  const bool only_build_files =
      files.count("package.xml") &&
      std::all_of(files.begin(), files.end(), [](const std::string &f) {
        return f == "package.xml" || f == "CMakeLists.txt";
      });
  if (only_build_files) return Category::kMeta;

  bool description = false, message = false;
  for (const auto &f : files) {
    SplitPath p = split_path(f);
    description = description || has_dir(p, "meshes") || has_dir(p, "robots");
    message = message || has_dir(p, "msg");
  }
  if (description) return Category::kDescription;
  if (message) return Category::kMessage;
  return Category::kFunction;
}

CodeFeatures extract_code_features(const std::set<std::string> &files) {
  CodeFeatures out;
  auto add = [](std::set<std::string> &set, std::string name) {
    if (!name.empty()) set.insert(std::move(name));
  };
  for (const auto &f : files) {
    SplitPath p = split_path(f);
    if (has_dir(p, "scripts")) add(out.nodes, stem_if(p.basename, ".py"));
    if (has_dir(p, "srv")) add(out.services, stem_if(p.basename, ".srv"));
    if (has_dir(p, "msg")) add(out.messages, stem_if(p.basename, ".msg"));
    if (has_dir(p, "action")) add(out.actions, stem_if(p.basename, ".action"));
    add(out.launches, stem_if(p.basename, ".launch"));
  }
  return out;
}

std::set<std::string> extract_nodes_from_cmake(std::string_view cmake_text,
                                               std::string_view package_name) {
  static const std::regex kAddExecutable(
      R"re(add_executable\s*\(\s*("?)([^\s()"]+)\1)re",
      std::regex::ECMAScript | std::regex::icase);
  static const std::string kProjectName = "${PROJECT_NAME}";

  const std::string text = strip_cmake_comments(cmake_text);
  std::set<std::string> nodes;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kAddExecutable);
       it != std::sregex_iterator(); ++it) {
    const auto &m = *it;
    size_t pos = static_cast<size_t>(m.position(0));
    if (pos > 0) {
      char before = text[pos - 1];
      if (std::isalnum(static_cast<unsigned char>(before)) || before == '_') continue;
    }
    std::string name = m[2].str();
    for (size_t at = name.find(kProjectName); at != std::string::npos;
         at = name.find(kProjectName, at + package_name.size())) {
      name.replace(at, kProjectName.size(), package_name);
    }
    if (name.find("${") != std::string::npos || name.empty()) continue;
    nodes.insert(std::move(name));
  }
  return nodes;
}

std::optional<HardwareMatch> match_hardware(std::string_view package_name,
                                            const HardwareVocabulary &vocab) {
  const std::string_view word = package_name.substr(0, package_name.find('_'));
  if (word.empty()) return std::nullopt;

  const HardwareEntry *best = nullptr;
  int best_score = -1;
  // Orders candidates: higher score, then robot, then smaller name.
  auto better = [](int score, const HardwareEntry &e, int other_score,
                   const HardwareEntry &other) {
    auto key = [](int s, const HardwareEntry &x) {
      return std::make_tuple(-s, x.kind == HardwareKind::kRobot ? 0 : 1,
                             std::string_view(x.canonical_name));
    };
    return key(score, e) < key(other_score, other);
  };
  for (const auto &entry : vocab.entries) {
    int score = 0;
    for (const auto &alias : entry.aliases) {
      score = std::max(score, similarity_ratio(word, alias));
    }
    if (!best || better(score, entry, best_score, *best)) {
      best = &entry;
      best_score = score;
    }
  }
  if (!best || best_score < kHardwareMatchThreshold) return std::nullopt;
  return HardwareMatch{best->canonical_name, best->kind, best_score};
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string s = collapse_whitespace(current);
    if (!s.empty()) out.push_back(std::move(s));
    current.clear();
  };
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return out;
}

PackageFeatures extract_all(const PackageRecord &record,
                            const HardwareVocabulary &vocab,
                            const Tagger &tagger) {
  PackageFeatures out;
  out.package = record.name;
  out.category = classify_category(record.files);
  out.code = extract_code_features(record.files);
  for (auto &node : extract_nodes_from_cmake(record.cmake_text, record.name)) {
    out.code.nodes.insert(std::move(node));
  }
  if (auto hw = match_hardware(record.name, vocab)) {
    auto &target = hw->kind == HardwareKind::kRobot ? out.robots : out.sensors;
    target.insert(hw->canonical_name);
  }

  std::vector<std::string> seen_functions, seen_characteristics;
  for (const auto &sentence : split_sentences(record.description)) {
    PhraseSet phrases = extract_phrases(tagger.tag(sentence));
    for (auto &f : phrases.functions) {
      insert_unique_ci(seen_functions, out.functions, std::move(f));
    }
    for (auto &c : phrases.characteristics) {
      insert_unique_ci(seen_characteristics, out.characteristics, std::move(c));
    }
  }
  return out;
}

std::vector<PackageFeatures> extract_corpus(const std::vector<PackageRecord> &records,
                                            const HardwareVocabulary &vocab,
                                            const Tagger &tagger) {
  std::vector<PackageFeatures> out;
  out.reserve(records.size());
  for (const auto &r : records) out.push_back(extract_all(r, vocab, tagger));
  std::sort(out.begin(), out.end(), [](const PackageFeatures &a, const PackageFeatures &b) {
    return a.package < b.package;
  });
  return out;
}

ordered_json features_to_json(const PackageFeatures &f) {
  ordered_json obj;
  obj["package"] = f.package;
  obj["robots"] = f.robots;
  obj["sensors"] = f.sensors;
  obj["category"] = category_name(f.category);
  obj["functions"] = f.functions;
  obj["characteristics"] = f.characteristics;
  obj["nodes"] = f.code.nodes;
  obj["services"] = f.code.services;
  obj["messages"] = f.code.messages;
  obj["actions"] = f.code.actions;
  obj["launches"] = f.code.launches;
  return obj;
}

PackageFeatures features_from_json(const json &obj) {
  if (!obj.is_object()) throw ParseError("expected a JSON object");
  PackageFeatures f;
  auto pkg = obj.find("package");
  if (pkg == obj.end() || !pkg->is_string() || pkg->get<std::string>().empty()) {
    throw ParseError("missing key 'package'");
  }
  f.package = pkg->get<std::string>();
  auto cat = obj.find("category");
  if (cat == obj.end() || !cat->is_string()) throw ParseError("missing key 'category'");
  auto parsed = parse_category(cat->get<std::string>());
  if (!parsed) throw ParseError("unknown category '" + cat->get<std::string>() + "'");
  f.category = *parsed;
  f.robots = string_set(obj, "robots");
  f.sensors = string_set(obj, "sensors");
  f.functions = string_set(obj, "functions");
  f.characteristics = string_set(obj, "characteristics");
  f.code.nodes = string_set(obj, "nodes");
  f.code.services = string_set(obj, "services");
  f.code.messages = string_set(obj, "messages");
  f.code.actions = string_set(obj, "actions");
  f.code.launches = string_set(obj, "launches");
  return f;
}

std::string format_features(const std::vector<PackageFeatures> &features) {
  std::string out;
  for (const auto &f : features) {
    out += dump_json(features_to_json(f));
    out += '\n';
  }
  return out;
}

std::vector<PackageFeatures> parse_features(std::string_view text) {
  std::vector<PackageFeatures> out;
  size_t line_no = 0;
  for (const auto &raw : split(text, '\n')) {
    ++line_no;
    if (trim_view(raw).empty()) continue;
    json obj = json::parse(raw, nullptr, false);
    if (obj.is_discarded()) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed JSON");
    }
    try {
      out.push_back(features_from_json(obj));
    } catch (const ParseError &e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_features(const std::vector<PackageFeatures> &features,
                    const std::filesystem::path &path) {
  write_file_atomic(path, format_features(features));
}

}  // namespace rpkg
