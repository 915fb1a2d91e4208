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

#include "rpkg/corpus.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "json_util.h"
#include "rpkg/error.h"
#include "rpkg/text.h"

namespace rpkg {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string remove_xml_comments(std::string_view text) {
  std::string out;
  size_t pos = 0;
  for (;;) {
    size_t open = text.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      return out;
    }
    out.append(text.substr(pos, open - pos));
    size_t close = text.find("-->", open + 4);
    if (close == std::string_view::npos) {
      throw ParseError("unterminated XML comment");
    }
    pos = close + 3;
  }
}

std::string decode_entities(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'},
      {"&quot;", '"'}, {"&apos;", '\''},
  };
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    bool replaced = false;
    if (s[i] == '&') {
      for (const auto &[entity, ch] : kEntities) {
        if (s.substr(i, entity.size()) == entity) {
          out.push_back(ch);
          i += entity.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(s[i++]);
  }
  return out;
}

// Drops markup nested inside an element body (e.g. <a href=...> links in
// descriptions), keeping the text.
std::string strip_tags(std::string_view s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') {
      in_tag = true;
      out.push_back(' ');
    } else if (c == '>' && in_tag) {
      in_tag = false;
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

// Returns the body of the first <tag ...>...</tag> element, or nullopt if
// absent. Self-closing elements yield an empty body.
std::optional<std::string> element_body(std::string_view text,
                                        std::string_view tag) {
  const std::string open = "<" + std::string(tag);
  size_t pos = 0;
  for (;;) {
    pos = text.find(open, pos);
    if (pos == std::string_view::npos) return std::nullopt;
    size_t after = pos + open.size();
    if (after >= text.size()) throw ParseError("truncated <" + std::string(tag) + "> element");
    char next = text[after];
    if (next == '>' || next == '/' || is_space(next)) break;
    pos = after;
  }
  size_t gt = text.find('>', pos);
  if (gt == std::string_view::npos) {
    throw ParseError("unterminated <" + std::string(tag) + "> tag");
  }
  if (text[gt - 1] == '/') return std::string();
  const std::string close = "</" + std::string(tag) + ">";
  size_t end = text.find(close, gt + 1);
  if (end == std::string_view::npos) {
    throw ParseError("missing </" + std::string(tag) + ">");
  }
  return std::string(text.substr(gt + 1, end - gt - 1));
}

struct LenientXml {
  std::optional<std::string> name;
  std::string description;
};

LenientXml parse_package_xml_lenient(std::string_view raw) {
  const std::string text = remove_xml_comments(raw);
  if (!element_body(text, "package")) {
    throw ParseError("no <package> element");
  }
  LenientXml out;
  if (auto name = element_body(text, "name")) {
    std::string value = collapse_whitespace(decode_entities(strip_tags(*name)));
    if (!value.empty()) out.name = std::move(value);
  }
  if (auto desc = element_body(text, "description")) {
    out.description = collapse_whitespace(decode_entities(strip_tags(*desc)));
  }
  return out;
}

bool has_dotdot_segment(std::string_view path) {
  for (const auto &segment : split(path, '/')) {
    if (segment == "..") return true;
  }
  return false;
}

std::string line_prefix(size_t line) {
  return "line " + std::to_string(line) + ": ";
}

PackageRecord record_from_json(const json &obj, size_t line) {
  if (!obj.is_object()) throw ParseError(line_prefix(line) + "expected a JSON object");
  static const std::set<std::string> kKeys = {"name", "description", "files",
                                              "cmake_text", "source_url"};
  for (const auto &item : obj.items()) {
    if (!kKeys.count(item.key())) {
      throw ParseError(line_prefix(line) + "unknown key '" + item.key() + "'");
    }
  }
  auto string_field = [&](const char *key) -> std::optional<std::string> {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
      throw ParseError(line_prefix(line) + "field '" + key + "' must be a string");
    }
    return it->get<std::string>();
  };

  PackageRecord record;
  auto name = string_field("name");
  if (!name || trim_view(*name).empty()) {
    throw ParseError(line_prefix(line) + "missing name");
  }
  record.name = *name;
  record.description = string_field("description").value_or("");
  record.cmake_text = string_field("cmake_text").value_or("");
  record.source_url = string_field("source_url");
  if (auto it = obj.find("files"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw ParseError(line_prefix(line) + "field 'files' must be an array of strings");
    }
    for (const auto &f : *it) {
      if (!f.is_string()) {
        throw ParseError(line_prefix(line) + "field 'files' must be an array of strings");
      }
      if (!record.files.insert(f.get<std::string>()).second) {
        throw ParseError(line_prefix(line) + "duplicate file '" + f.get<std::string>() + "'");
      }
    }
  }
  try {
    validate_record(record);
  } catch (const ParseError &e) {
    throw ParseError(line_prefix(line) + e.what());
  }
  return record;
}

std::vector<std::string> string_list(const json &obj, const char *key,
                                     size_t line) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw ParseError(line_prefix(line) + "field '" + key + "' must be an array of strings");
  }
  for (const auto &v : *it) {
    if (!v.is_string()) {
      throw ParseError(line_prefix(line) + "field '" + key + "' must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

void validate_record(const PackageRecord &record) {
  if (trim_view(record.name).empty()) throw ParseError("missing name");
  for (const auto &file : record.files) {
    if (file.empty()) throw ParseError("empty file path");
    if (file.front() == '/') throw ParseError("absolute file path '" + file + "'");
    if (has_dotdot_segment(file)) throw ParseError("file path '" + file + "' contains '..'");
  }
}

std::string_view hardware_kind_name(HardwareKind kind) {
  return kind == HardwareKind::kRobot ? "robot" : "sensor";
}

std::optional<HardwareKind> parse_hardware_kind(std::string_view token) {
  if (token == "robot") return HardwareKind::kRobot;
  if (token == "sensor") return HardwareKind::kSensor;
  return std::nullopt;
}

size_t HardwareVocabulary::count(HardwareKind kind) const {
  return std::count_if(entries.begin(), entries.end(),
                       [kind](const HardwareEntry &e) { return e.kind == kind; });
}

PackageXml parse_package_xml(std::string_view text) {
  const std::string stripped = remove_xml_comments(text);
  auto name = element_body(stripped, "name");
  std::string value =
      name ? collapse_whitespace(decode_entities(strip_tags(*name))) : "";
  if (value.empty()) throw ParseError("package.xml has no <name> element");
  PackageXml out;
  out.name = std::move(value);
  if (auto desc = element_body(stripped, "description")) {
    out.description = collapse_whitespace(decode_entities(strip_tags(*desc)));
  }
  return out;
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path &path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IngestError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IngestError("cannot replace " + path.string());
  }
}

std::vector<PackageRecord> scan_tree(const fs::path &root,
                                     const WarningSink &warn) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IngestError("corpus root is not a readable directory: " + root.string());
  }
  auto report = [&](const std::string &msg) {
    if (warn) {
      warn(msg);
    } else {
      std::cerr << "warning: " << msg << "\n";
    }
  };

  std::vector<fs::path> package_dirs;
  if (fs::is_regular_file(root / "package.xml")) {
    package_dirs.push_back(root);
  } else {
    fs::recursive_directory_iterator it(root, ec), end;
    if (ec) throw IngestError("cannot read " + root.string() + ": " + ec.message());
    for (; it != end; it.increment(ec)) {
      if (ec) throw IngestError("cannot read " + root.string() + ": " + ec.message());
      if (!it->is_directory()) continue;
      const std::string leaf = it->path().filename().string();
      if (!leaf.empty() && leaf.front() == '.') {
        it.disable_recursion_pending();
        continue;
      }
      if (fs::is_regular_file(it->path() / "package.xml")) {
        package_dirs.push_back(it->path());
        it.disable_recursion_pending();
      }
    }
  }

  std::vector<PackageRecord> records;
  for (const auto &dir : package_dirs) {
    PackageRecord record;
    try {
      auto xml = parse_package_xml_lenient(read_file(dir / "package.xml"));
      record.name = xml.name.value_or(dir.filename().string());
      record.description = std::move(xml.description);
    } catch (const Error &e) {
      report("skipping " + dir.string() + ": malformed package.xml (" + e.what() + ")");
      continue;
    }
    for (fs::recursive_directory_iterator it(dir, ec), end; it != end; it.increment(ec)) {
      if (ec) break;
      const std::string leaf = it->path().filename().string();
      if (it->is_directory() && !leaf.empty() && leaf.front() == '.') {
        it.disable_recursion_pending();
        continue;
      }
      if (!it->is_regular_file()) continue;
      record.files.insert(fs::relative(it->path(), dir).generic_string());
    }
    if (fs::is_regular_file(dir / "CMakeLists.txt")) {
      record.cmake_text = read_file(dir / "CMakeLists.txt");
    }
    records.push_back(std::move(record));
  }
  std::sort(records.begin(), records.end(),
            [](const PackageRecord &a, const PackageRecord &b) { return a.name < b.name; });
  return records;
}

std::vector<PackageRecord> parse_manifest(std::string_view text) {
  std::vector<PackageRecord> records;
  std::map<std::string, size_t> seen;
  size_t line_no = 0;
  for (const auto &raw : split(text, '\n')) {
    ++line_no;
    if (trim_view(raw).empty()) continue;
    json obj = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) throw ParseError(line_prefix(line_no) + "malformed JSON");
    PackageRecord record = record_from_json(obj, line_no);
    auto [it, inserted] = seen.emplace(record.name, line_no);
    if (!inserted) {
      throw ParseError(line_prefix(line_no) + "duplicate package name '" +
                       record.name + "' (first on line " + std::to_string(it->second) + ")");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<PackageRecord> load_manifest(const fs::path &path) {
  return parse_manifest(read_file(path));
}

std::string format_manifest(const std::vector<PackageRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    ordered_json obj;
    obj["name"] = r.name;
    obj["description"] = r.description;
    obj["files"] = r.files;
    obj["cmake_text"] = r.cmake_text;
    obj["source_url"] = r.source_url ? ordered_json(*r.source_url) : ordered_json(nullptr);
    out += dump_json(obj);
    out += '\n';
  }
  return out;
}

void write_manifest(const std::vector<PackageRecord> &records, const fs::path &path) {
  write_file_atomic(path, format_manifest(records));
}

HardwareVocabulary parse_vocabulary(std::string_view text) {
  HardwareVocabulary vocab;
  std::map<std::pair<HardwareKind, std::string>, size_t> seen;
  size_t line_no = 0;
  for (const auto &raw : split(text, '\n')) {
    ++line_no;
    if (trim_view(raw).empty()) continue;
    json obj = json::parse(raw, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw ParseError(line_prefix(line_no) + "malformed JSON");
    }
    HardwareEntry entry;
    auto name = obj.find("name");
    if (name == obj.end() || !name->is_string() || trim_view(name->get<std::string>()).empty()) {
      throw ParseError(line_prefix(line_no) + "missing name");
    }
    entry.canonical_name = trim(name->get<std::string>());
    auto kind = obj.find("kind");
    if (kind == obj.end() || !kind->is_string()) {
      throw ParseError(line_prefix(line_no) + "missing kind");
    }
    auto parsed_kind = parse_hardware_kind(kind->get<std::string>());
    if (!parsed_kind) {
      throw ParseError(line_prefix(line_no) + "unknown kind '" + kind->get<std::string>() + "'");
    }
    entry.kind = *parsed_kind;

    entry.aliases.push_back(entry.canonical_name);
    for (auto &alias : string_list(obj, "aliases", line_no)) {
      std::string a = trim(alias);
      if (a.empty()) throw ParseError(line_prefix(line_no) + "empty alias");
      bool dup = std::any_of(entry.aliases.begin(), entry.aliases.end(),
                             [&](const std::string &x) { return iequals(x, a); });
      if (!dup) entry.aliases.push_back(std::move(a));
    }
    if (auto d = obj.find("description"); d != obj.end() && d->is_string()) {
      entry.description = d->get<std::string>();
    }
    entry.tags = string_list(obj, "tags", line_no);

    auto key = std::make_pair(entry.kind, to_lower(entry.canonical_name));
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      throw ParseError(line_prefix(line_no) + "duplicate " +
                       std::string(hardware_kind_name(entry.kind)) + " '" +
                       entry.canonical_name + "' (first on line " +
                       std::to_string(it->second) + ")");
    }
    vocab.entries.push_back(std::move(entry));
  }
  return vocab;
}

HardwareVocabulary load_vocabulary(const fs::path &path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IngestError("vocabulary not found: " + path.string());
  }
  return parse_vocabulary(read_file(path));
}

std::vector<PackageRecord> load_corpus(const fs::path &path, const WarningSink &warn) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return scan_tree(path, warn);
  if (!fs::is_regular_file(path, ec)) {
    throw IngestError("corpus not found: " + path.string());
  }
  return load_manifest(path);
}

}  // namespace rpkg
