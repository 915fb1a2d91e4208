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

// Compares the rule-based extractors against the hand-written expectations
// in extraction_goldens.jsonl. Returns one message per mismatch.

#ifndef RPKG_TESTS_SUPPORT_GOLDENS_H_
#define RPKG_TESTS_SUPPORT_GOLDENS_H_

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rpkg/corpus.h"
#include "rpkg/extraction.h"
#include "rpkg/text.h"

namespace goldens {

struct Outcome {
  size_t checked = 0;
  std::vector<std::string> mismatches;
};

inline std::string join(const std::set<std::string> &s) {
  std::string out = "{";
  for (const auto &x : s) out += (out.size() > 1 ? "," : "") + x;
  return out + "}";
}

inline Outcome check(const std::filesystem::path &data_dir) {
  using nlohmann::json;
  const auto vocab = rpkg::load_vocabulary(data_dir / "vocabulary.jsonl");
  std::map<std::string, std::vector<rpkg::PackageRecord>> corpora = {
      {"tree", rpkg::load_corpus(data_dir / "tree")},
      {"bench", rpkg::load_corpus(data_dir / "bench_corpus.jsonl")}};

  Outcome out;
  std::map<std::string, std::set<std::string>> seen;
  for (const auto &line : rpkg::split(rpkg::read_file(data_dir / "extraction_goldens.jsonl"), '\n')) {
    if (rpkg::trim_view(line).empty()) continue;
    json g = json::parse(line);
    const std::string corpus = g.at("corpus");
    const std::string name = g.at("package");
    seen[corpus].insert(name);
    auto fail = [&](const std::string &what) { out.mismatches.push_back(corpus + "/" + name + ": " + what); };

    const auto &records = corpora.at(corpus);
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const rpkg::PackageRecord &r) { return r.name == name; });
    if (it == records.end()) {
      fail("package missing from corpus");
      continue;
    }
    ++out.checked;

    auto category = rpkg::classify_category(it->files);
    if (rpkg::parse_category(g.at("category").get<std::string>()) != category) {
      fail("category " + std::string(rpkg::category_name(category)));
    }

    rpkg::CodeFeatures code = rpkg::extract_code_features(it->files);
    for (auto &n : rpkg::extract_nodes_from_cmake(it->cmake_text, it->name)) code.nodes.insert(n);
    const std::pair<const char *, const std::set<std::string> *> fields[] = {
        {"nodes", &code.nodes},       {"services", &code.services}, {"messages", &code.messages},
        {"actions", &code.actions},   {"launches", &code.launches}};
    for (const auto &[key, got] : fields) {
      auto want = g.at(key).get<std::set<std::string>>();
      if (want != *got) fail(std::string(key) + " " + join(*got) + " != " + join(want));
    }

    auto hw = rpkg::match_hardware(it->name, vocab);
    if (g.at("hardware").is_null()) {
      if (hw) fail("unexpected hardware " + hw->canonical_name);
    } else {
      const auto &h = g.at("hardware");
      if (!hw) {
        fail("no hardware match");
      } else if (hw->canonical_name != h.at("name") ||
                 rpkg::hardware_kind_name(hw->kind) != h.at("kind").get<std::string>() ||
                 hw->score != h.at("score").get<int>()) {
        fail("hardware " + hw->canonical_name + "/" + std::to_string(hw->score));
      }
    }

    // The full pipeline must agree with the individual extractors.
    auto all = rpkg::extract_all(*it, vocab);
    if (all.category != category || all.code != code) fail("extract_all disagrees");
  }
  for (const auto &[corpus, records] : corpora) {
    for (const auto &r : records) {
      if (!seen[corpus].count(r.name)) out.mismatches.push_back(corpus + "/" + r.name + ": no golden");
    }
  }
  return out;
}

}  // namespace goldens

#endif  // RPKG_TESTS_SUPPORT_GOLDENS_H_
