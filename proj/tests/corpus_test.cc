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

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rpkg/corpus.h"
#include "rpkg/error.h"
#include "support/fixtures.h"
#include "support/printers.h"

using namespace rpkg;

namespace {

std::string package_xml(const std::string &name, const std::string &description) {
  return "<?xml version=\"1.0\"?>\n<package format=\"2\">\n  <name>" + name +
         "</name>\n  <description>" + description + "</description>\n</package>\n";
}

std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("parse_package_xml extracts name and description") {
  auto x = parse_package_xml("<package><name>a_pkg</name><description> does X </description></package>");
  CHECK(x.name == "a_pkg");
  CHECK(x.description == "does X");

  auto no_desc = parse_package_xml("<package><name>a_pkg</name></package>");
  CHECK(no_desc.name == "a_pkg");
  CHECK(no_desc.description.empty());

  // Tabs and newlines collapse to single spaces.
  auto multi = parse_package_xml(
      "<package><name>a_pkg</name><description>\n\tfirst line\n\t\tsecond   line\n</description></package>");
  CHECK(multi.description == "first line second line");
}

TEST_CASE("parse_package_xml handles attributes, comments and entities") {
  auto x = parse_package_xml(
      "<?xml version=\"1.0\"?>\n<!-- <name>wrong</name> -->\n<package format=\"3\">"
      "<name> b_pkg </name><description type=\"text\">Drives &lt;fast&gt; &amp; "
      "<a href=\"x\">safe</a></description><description>second</description></package>");
  CHECK(x.name == "b_pkg");
  CHECK(x.description == "Drives <fast> & safe");
}

TEST_CASE("parse_package_xml rejects a missing name") {
  CHECK_THROWS_AS(parse_package_xml("<package><description>x</description></package>"), ParseError);
  CHECK_THROWS_AS(parse_package_xml("<package><name></name></package>"), ParseError);
}

TEST_CASE("validate_record enforces path invariants") {
  PackageRecord r{"p", "", {"a/b.txt"}, "", std::nullopt};
  CHECK_NOTHROW(validate_record(r));
  r.files = {"/etc/passwd"};
  CHECK_THROWS_AS(validate_record(r), ParseError);
  r.files = {"a/../b"};
  CHECK_THROWS_AS(validate_record(r), ParseError);
  r.files = {"a/..b/c"};
  CHECK_NOTHROW(validate_record(r));
  r.name = " ";
  CHECK_THROWS_AS(validate_record(r), ParseError);
}

TEST_CASE("scan_tree finds a single package") {
  fixtures::TempDir dir;
  dir.write("turtlebot_bringup/package.xml", package_xml("turtlebot_bringup", "Bringup."));
  auto records = scan_tree(dir.path());
  REQUIRE(records.size() == 1);
  CHECK(records[0].name == "turtlebot_bringup");
  CHECK(records[0].description == "Bringup.");
  CHECK(records[0].files == std::set<std::string>{"package.xml"});
}

TEST_CASE("scan_tree on a tree without packages is empty") {
  fixtures::TempDir dir;
  dir.write("docs/readme.txt", "nothing");
  CHECK(scan_tree(dir.path()).empty());
}

TEST_CASE("scan_tree matches the authored fixture listing") {
  auto records = scan_tree(fixtures::data("tree"));
  REQUIRE(records.size() == 8);

  // Listing produced by `find . -type f | sort` inside the fixture tree.
  std::map<std::string, std::set<std::string>> expected;
  for (const auto &line : lines_of(fixtures::slurp(fixtures::data("tree_listing.txt")))) {
    auto slash = line.find('/');
    expected[line.substr(0, slash)].insert(line.substr(slash + 1));
  }
  REQUIRE(expected.size() == 8);
  for (const auto &r : records) {
    INFO(r.name);
    REQUIRE(expected.count(r.name) == 1);
    CHECK(r.files == expected[r.name]);
  }
  CHECK(std::is_sorted(records.begin(), records.end(),
                       [](const auto &a, const auto &b) { return a.name < b.name; }));

  const auto &bringup = *std::find_if(records.begin(), records.end(),
                                      [](const auto &r) { return r.name == "turtlebot_bringup"; });
  CHECK(bringup.description ==
        "turtlebot_bringup provides roslaunch scripts for starting the TurtleBot base functionality.");
  CHECK(bringup.cmake_text.find("project(turtlebot_bringup)") != std::string::npos);
}

TEST_CASE("scan_tree skips malformed package.xml with a warning") {
  fixtures::TempDir dir;
  dir.write("good/package.xml", package_xml("good", "fine"));
  dir.write("bad/package.xml", "<package><name>bad</name><description>never closed");
  dir.write("unnamed/package.xml", "<package><description>no name</description></package>");
  dir.write(".hidden/package.xml", package_xml("hidden", ""));
  std::vector<std::string> warnings;
  auto records = scan_tree(dir.path(), [&](const std::string &w) { warnings.push_back(w); });
  REQUIRE(records.size() == 2);
  CHECK(records[0].name == "good");
  CHECK(records[1].name == "unnamed");  // falls back to the directory name
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("bad") != std::string::npos);
}

TEST_CASE("scan_tree does not descend into a package") {
  fixtures::TempDir dir;
  dir.write("outer/package.xml", package_xml("outer", ""));
  dir.write("outer/test/inner/package.xml", package_xml("inner", ""));
  dir.write("stack/leaf/package.xml", package_xml("leaf", ""));
  auto records = scan_tree(dir.path());
  REQUIRE(records.size() == 2);
  CHECK(records[0].name == "leaf");
  CHECK(records[1].name == "outer");
  CHECK(records[1].files.count("test/inner/package.xml") == 1);
}

TEST_CASE("scan_tree output is independent of creation order") {
  std::vector<std::string> names = {"delta", "alpha", "charlie", "bravo", "echo"};
  std::vector<PackageRecord> first;
  for (int round = 0; round < 3; ++round) {
    fixtures::TempDir dir;
    for (const auto &n : names) dir.write(n + "/package.xml", package_xml(n, n + " pkg"));
    auto records = scan_tree(dir.path());
    if (round == 0) {
      first = records;
    } else {
      CHECK(records == first);
    }
    std::rotate(names.begin(), names.begin() + 2, names.end());
  }
}

TEST_CASE("scan_tree rejects an unreadable root") {
  CHECK_THROWS_AS(scan_tree("/nonexistent/rpkg/root"), IngestError);
  fixtures::TempDir dir;
  auto file = dir.write("plain.txt", "x");
  CHECK_THROWS_AS(scan_tree(file), IngestError);
}

TEST_CASE("load_manifest preserves file order") {
  auto records = parse_manifest(
      "{\"name\":\"zeta\",\"description\":\"z\",\"files\":[\"package.xml\"],\"cmake_text\":\"\",\"source_url\":null}\n"
      "{\"name\":\"alpha\",\"description\":\"a\",\"files\":[],\"cmake_text\":\"x\",\"source_url\":\"http://a\"}\n"
      "{\"name\":\"mid\"}\n");
  REQUIRE(records.size() == 3);
  CHECK(records[0].name == "zeta");
  CHECK(records[1].name == "alpha");
  CHECK(records[1].source_url == std::optional<std::string>("http://a"));
  CHECK(records[2].name == "mid");
  CHECK(records[2].files.empty());
}

TEST_CASE("load_manifest errors name the line") {
  auto message = [](const std::string &text) {
    try {
      parse_manifest(text);
    } catch (const ParseError &e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\"name\":\"a\"}\n{\"description\":\"x\"}\n") == "line 2: missing name");
  CHECK(message("{\"name\":\"a\"}\n\n{oops\n").rfind("line 3:", 0) == 0);
  CHECK(message("{\"name\":\"a\",\"colour\":\"red\"}").rfind("line 1:", 0) == 0);
  std::string dup = message("{\"name\":\"a\"}\n{\"name\":\"b\"}\n{\"name\":\"a\"}\n");
  CHECK(dup.rfind("line 3:", 0) == 0);
  CHECK(dup.find("line 1") != std::string::npos);
  CHECK(message("{\"name\":\"a\",\"files\":[\"/abs\"]}").rfind("line 1:", 0) == 0);
}

TEST_CASE("manifest round-trips scan_tree output") {
  fixtures::TempDir dir;
  auto records = scan_tree(fixtures::data("tree"));
  write_manifest(records, dir / "corpus.jsonl");
  auto loaded = load_manifest(dir / "corpus.jsonl");
  CHECK(loaded == records);
  CHECK(load_corpus(dir / "corpus.jsonl") == records);
  CHECK(load_corpus(fixtures::data("tree")) == records);
}

TEST_CASE("manifest round-trip property over generated records") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> alphabet = {"a", "b", "c", "X", "Y", "Z", "_", "-", ".", "/", " ",
                                              "\t", "\"", "\\", "\n", "{", "}", "\u00e9", "\u2713"};
  auto text = [&](size_t max_len) {
    std::string s;
    size_t len = std::uniform_int_distribution<size_t>(0, max_len)(rng);
    for (size_t i = 0; i < len; ++i) {
      s += alphabet[std::uniform_int_distribution<size_t>(0, alphabet.size() - 1)(rng)];
    }
    return s;
  };
  for (int round = 0; round < 50; ++round) {
    std::vector<PackageRecord> records;
    size_t n = std::uniform_int_distribution<size_t>(0, 6)(rng);
    for (size_t i = 0; i < n; ++i) {
      PackageRecord r;
      r.name = "pkg" + std::to_string(i) + "_" + text(5);
      r.description = text(40);
      for (int f = 0; f < 4; ++f) r.files.insert("dir" + std::to_string(f) + "/file" + std::to_string(rng() % 9));
      r.cmake_text = text(60);
      if (rng() % 2) r.source_url = "https://example.org/" + std::to_string(i);
      records.push_back(r);
    }
    CHECK(parse_manifest(format_manifest(records)) == records);
  }
}

TEST_CASE("load_vocabulary reads entries and inserts canonical aliases") {
  auto vocab = parse_vocabulary(
      "{\"name\":\"Turtlebot2\",\"kind\":\"robot\",\"aliases\":[\"turtlebot\"]}\n"
      "{\"name\":\"Velodyne\",\"kind\":\"sensor\"}\n");
  REQUIRE(vocab.entries.size() == 2);
  const auto &tb = vocab.entries[0];
  CHECK(tb.kind == HardwareKind::kRobot);
  CHECK(std::set<std::string>(tb.aliases.begin(), tb.aliases.end()) ==
        std::set<std::string>{"turtlebot", "Turtlebot2"});
  CHECK(vocab.entries[1].aliases == std::vector<std::string>{"Velodyne"});
}

TEST_CASE("fixture vocabulary counts per kind") {
  auto vocab = load_vocabulary(fixtures::data("vocabulary.jsonl"));
  CHECK(vocab.entries.size() == 20);
  CHECK(vocab.count(HardwareKind::kRobot) == 10);
  CHECK(vocab.count(HardwareKind::kSensor) == 10);
}

TEST_CASE("load_vocabulary errors") {
  CHECK_THROWS_AS(parse_vocabulary("{\"name\":\"A\",\"kind\":\"robot\"}\n{\"name\":\"a\",\"kind\":\"robot\"}"),
                  ParseError);
  CHECK_NOTHROW(parse_vocabulary("{\"name\":\"A\",\"kind\":\"robot\"}\n{\"name\":\"A\",\"kind\":\"sensor\"}"));
  CHECK_THROWS_AS(parse_vocabulary("{\"name\":\"A\",\"kind\":\"drone\"}"), ParseError);
  CHECK_THROWS_AS(parse_vocabulary("{\"name\":\"A\",\"kind\":\"robot\",\"aliases\":[\"\"]}"), ParseError);
  try {
    load_vocabulary("/nonexistent/vocab.jsonl");
    FAIL("expected an error");
  } catch (const IngestError &e) {
    CHECK(std::string(e.what()).find("vocabulary not found") != std::string::npos);
  }
}

TEST_CASE("write_file_atomic replaces existing content") {
  fixtures::TempDir dir;
  auto p = dir / "out.txt";
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  CHECK(fixtures::slurp(p) == "second");
  CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
}

TEST_CASE("format_manifest tolerates invalid UTF-8 in descriptions") {
  PackageRecord r{"latin1", std::string("caf\xe9"), {}, "", std::nullopt};
  std::string text;
  CHECK_NOTHROW(text = format_manifest({r}));
  auto back = parse_manifest(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].description == "caf\xef\xbf\xbd");
}
