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

#ifndef RPKG_CORPUS_H_
#define RPKG_CORPUS_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rpkg {

// Raw inputs for one package, as ingested from a directory tree or a
// manifest line. File paths are relative to the package root and use '/'.
struct PackageRecord {
  std::string name;
  std::string description;
  std::set<std::string> files;
  std::string cmake_text;
  std::optional<std::string> source_url;

  bool operator==(const PackageRecord &) const = default;
};

// Throws ParseError if the record breaks its invariants: empty name, an
// absolute file path, or a path with a ".." segment.
void validate_record(const PackageRecord &record);

enum class HardwareKind { kRobot, kSensor };

std::string_view hardware_kind_name(HardwareKind kind);
std::optional<HardwareKind> parse_hardware_kind(std::string_view token);

struct HardwareEntry {
  std::string canonical_name;
  HardwareKind kind = HardwareKind::kRobot;
  // Always contains canonical_name itself.
  std::vector<std::string> aliases;
  std::optional<std::string> description;
  std::vector<std::string> tags;
};

struct HardwareVocabulary {
  std::vector<HardwareEntry> entries;

  size_t count(HardwareKind kind) const;
};

struct PackageXml {
  std::string name;
  std::string description;
};

// Extracts the first <name> and <description> elements. Description
// whitespace is collapsed; a missing description yields "". Throws
// ParseError if there is no non-empty name element.
PackageXml parse_package_xml(std::string_view text);

using WarningSink = std::function<void(const std::string &)>;

// Finds every directory under root holding a package.xml and turns it into
// a record. Malformed package.xml files are reported through `warn` and
// skipped. Output is sorted by package name.
std::vector<PackageRecord> scan_tree(const std::filesystem::path &root,
                                     const WarningSink &warn = {});

// Line-delimited JSON manifest, one record per line. Blank lines are
// ignored but still counted for error messages.
std::vector<PackageRecord> load_manifest(const std::filesystem::path &path);
std::vector<PackageRecord> parse_manifest(std::string_view text);
std::string format_manifest(const std::vector<PackageRecord> &records);
void write_manifest(const std::vector<PackageRecord> &records,
                    const std::filesystem::path &path);

HardwareVocabulary load_vocabulary(const std::filesystem::path &path);
HardwareVocabulary parse_vocabulary(std::string_view text);

// Loads a corpus from either a directory tree or a manifest file.
std::vector<PackageRecord> load_corpus(const std::filesystem::path &path,
                                       const WarningSink &warn = {});

// Reads a whole file; throws IngestError when it cannot be opened.
std::string read_file(const std::filesystem::path &path);

// Writes through a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path,
                       std::string_view contents);

}  // namespace rpkg

#endif  // RPKG_CORPUS_H_
