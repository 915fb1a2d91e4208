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

#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rpkg/cli.h"
#include "rpkg/graph.h"
#include "rpkg/search.h"
#include "rpkg/text.h"
#include "support/fixtures.h"
#include "support/printers.h"
// After Eigen: <resolv.h> defines _res.
#include "httplib.h"

using namespace rpkg;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run rpkg_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rpkg");
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string &haystack, const std::string &needle) {
  return haystack.find(needle) != std::string::npos;
}

// Builds the benchmark fixture graph once per process.
const std::string &bench_graph_path() {
  static fixtures::TempDir dir;
  static const std::string path = [] {
    const std::string p = (dir / "bench.json").string();
    Run r = rpkg_cli({"build", "--corpus", fixtures::data("bench_corpus.jsonl").string(),
                      "--vocab", fixtures::data("vocabulary.jsonl").string(), "--out", p});
    REQUIRE(r.code == 0);
    return p;
  }();
  return path;
}

std::vector<std::string> lines_of(const std::string &text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

TEST_CASE("build on the fixture tree") {
  fixtures::TempDir dir;
  const std::string out = (dir / "g.json").string();
  Run r = rpkg_cli({"build", "--corpus", fixtures::data("tree").string(), "--vocab",
                    fixtures::data("vocabulary.jsonl").string(), "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out == "packages=8 entities=46 relations=44\n");
  const std::string first = fixtures::slurp(out);
  CHECK(load_graph(out).package_count() == 8);

  // A rebuild replaces the file and leaves no temporaries behind.
  dir.write("g.json", "stale");
  r = rpkg_cli({"build", "--corpus", fixtures::data("tree").string(), "--vocab",
                fixtures::data("vocabulary.jsonl").string(), "--out", out});
  CHECK(r.code == 0);
  CHECK(fixtures::slurp(out) == first);
  size_t files = 0;
  for (const auto &e : std::filesystem::directory_iterator(dir.path())) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
}

TEST_CASE("build failures exit 1") {
  fixtures::TempDir dir;
  Run r = rpkg_cli({"build", "--corpus", fixtures::data("tree").string(), "--vocab",
                    (dir / "missing.jsonl").string(), "--out", (dir / "g.json").string()});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "vocabulary not found"));
  CHECK_FALSE(std::filesystem::exists(dir / "g.json"));

  r = rpkg_cli({"build", "--corpus", (dir / "nowhere").string(), "--vocab",
                fixtures::data("vocabulary.jsonl").string(), "--out", (dir / "g.json").string()});
  CHECK(r.code == 1);
}

TEST_CASE("build reports embedding coverage") {
  fixtures::TempDir dir;
  dir.write("emb.txt", "rpkg-emb v1 dim=2\nvisualize turtlebot2 with rviz\t1 0\n");
  Run r = rpkg_cli({"build", "--corpus", fixtures::data("bench_corpus.jsonl").string(), "--vocab",
                    fixtures::data("vocabulary.jsonl").string(), "--out",
                    (dir / "g.json").string(), "--embeddings", (dir / "emb.txt").string()});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "embeddings: dim=2 covered="));
}

TEST_CASE("search ranks the benchmark query 4-3 package first") {
  Run r = rpkg_cli({"search", "--graph", bench_graph_path(), "--robot", "Turtlebot2",
                    "--function", "visualize Turtlebot2", "--characteristics", "RViz", "--top",
                    "5"});
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "rank\tpackage\tscore\tmatched");
  CHECK(lines[1].rfind("1\tturtlebot_rviz_launchers\t", 0) == 0);
  auto cols = split(lines[1], '\t');
  REQUIRE(cols.size() == 4);
  CHECK(cols[2].size() == 6);  // d.dddd
  CHECK(contains(cols[3], "robot="));
}

TEST_CASE("search JSON scores recompute from per-dimension scores") {
  Run r = rpkg_cli({"search", "--graph", bench_graph_path(), "--robot", "Turtlebot2",
                    "--function", "visualize Turtlebot2", "--characteristics", "RViz,Gazebo",
                    "--format", "json", "--top", "32", "--weight-function", "0.5"});
  REQUIRE(r.code == 0);
  json results = json::parse(r.out);
  REQUIRE(results.is_array());
  REQUIRE(results.size() == 32);
  WeightConfig w;
  w[Dimension::kFunction] = 0.5;
  for (const auto &item : results) {
    double num = 0, den = 0;
    for (const auto &[name, s] : item.at("per_dimension").items()) {
      double wk = w[*parse_dimension(name)];
      num += wk * s.get<double>();
      den += wk;
    }
    CHECK(item.at("score").get<double>() == doctest::Approx(num / den).epsilon(1e-12));
  }
}

TEST_CASE("search usage errors exit 2") {
  Run r = rpkg_cli({"search", "--graph", bench_graph_path()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "--robot"));

  r = rpkg_cli({"search", "--graph", bench_graph_path(), "--robot", "  "});
  CHECK(r.code == 2);

  r = rpkg_cli({"search", "--graph", "/nonexistent/g.json", "--robot", "Husky"});
  CHECK(r.code == 2);

  r = rpkg_cli({"search", "--graph", bench_graph_path(), "--robot", "Husky", "--format", "xml"});
  CHECK(r.code == 2);

  r = rpkg_cli({"search", "--graph", bench_graph_path(), "--robot", "Husky",
                "--weight-function", "1.5"});
  CHECK(r.code == 2);

  // A zero top score is still a successful search.
  r = rpkg_cli({"search", "--graph", bench_graph_path(), "--node", "no_such_node", "--top", "1"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "0.0000"));
}

TEST_CASE("eval on the benchmark fixture") {
  const std::string queries = fixtures::data("bench_queries.jsonl").string();
  Run r = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries", queries});
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "queries=20");
  double prev = 0.0;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto cols = split(lines[i], '\t');
    REQUIRE(cols.size() == 2);
    double v = std::stod(cols[1]);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(lines[1] == "top@1\t1.0000");

  r = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries", queries, "--ablate",
                "characteristics"});
  REQUIRE(r.code == 0);
  CHECK(lines_of(r.out)[0] == "queries=20 ablated=characteristics");
}

TEST_CASE("eval sampling, output files and errors") {
  fixtures::TempDir dir;
  const std::string queries = fixtures::data("bench_queries.jsonl").string();
  const std::vector<std::string> base = {"eval",          "--graph", bench_graph_path(),
                                         "--queries",     queries,   "--sample-size",
                                         "10",            "--seed",  "7"};
  auto with_out = [&](const std::string &name, const std::string &format) {
    auto args = base;
    args.insert(args.end(), {"--out", (dir / name).string(), "--format", format});
    return rpkg_cli(args);
  };
  Run a = with_out("a.json", "json");
  Run b = with_out("b.json", "json");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines_of(a.out)[0] == "queries=10 sample_size=10 seed=7");
  CHECK(fixtures::slurp(dir / "a.json") == fixtures::slurp(dir / "b.json"));
  CHECK(json::parse(fixtures::slurp(dir / "a.json")).at("config").at("seed") == 7);

  Run c = with_out("c.csv", "csv");
  REQUIRE(c.code == 0);
  CHECK(lines_of(fixtures::slurp(dir / "c.csv")).size() == 6);

  dir.write("dup.jsonl",
            "{\"id\": \"a\", \"query\": {\"robot\": \"x\"}, \"expected_package\": \"p\"}\n"
            "{\"id\": \"a\", \"query\": {\"robot\": \"x\"}, \"expected_package\": \"p\"}\n");
  Run bad = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries",
                      (dir / "dup.jsonl").string()});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "duplicate"));

  Run too_many = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries", queries,
                           "--sample-size", "21"});
  CHECK(too_many.code == 2);
  Run unknown_dim = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries", queries,
                              "--ablate", "colour"});
  CHECK(unknown_dim.code == 2);
  Run bad_levels = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries", queries,
                             "--levels", "1,x"});
  CHECK(bad_levels.code == 2);

  Run unwritable = rpkg_cli({"eval", "--graph", bench_graph_path(), "--queries", queries,
                             "--out", (dir / "no" / "such" / "dir" / "r.json").string()});
  CHECK(unwritable.code == 1);
}

TEST_CASE("stats") {
  fixtures::TempDir dir;
  const std::string g = (dir / "g.json").string();
  REQUIRE(rpkg_cli({"build", "--corpus", fixtures::data("tree").string(), "--vocab",
                    fixtures::data("vocabulary.jsonl").string(), "--out", g})
              .code == 0);
  Run r = rpkg_cli({"stats", "--graph", g});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "entity\tPackage\t8\n"));
  CHECK(contains(r.out, "entity\tCharacteristic\t11\n"));
  CHECK(contains(r.out, "relation\tis_in_category\t8\n"));
  CHECK(contains(r.out, "entities=46 relations=44"));

  Run j = rpkg_cli({"stats", "--graph", g, "--format", "json"});
  REQUIRE(j.code == 0);
  json body = json::parse(j.out);
  CHECK(body.at("total_entities") == 46);
  CHECK(body.at("total_relations") == 44);

  dir.write("empty.json", format_graph(graph_from_parts({}, {})));
  Run empty = rpkg_cli({"stats", "--graph", (dir / "empty.json").string(), "--format", "json"});
  REQUIRE(empty.code == 0);
  CHECK(json::parse(empty.out).at("total_entities") == 0);
}

TEST_CASE("serve exits 1 when the port is taken") {
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  Run r = rpkg_cli({"serve", "--graph", bench_graph_path(), "--host", "127.0.0.1", "--port",
                    std::to_string(port)});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "cannot bind"));

  r = rpkg_cli({"serve", "--graph", bench_graph_path(), "--port", "70000"});
  CHECK(r.code == 2);
}

TEST_CASE("usage") {
  CHECK(rpkg_cli({}).code == 2);
  Run help = rpkg_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "search"));
  CHECK(rpkg_cli({"frobnicate"}).code == 2);
  CHECK(rpkg_cli({"build", "--corpus", "x"}).code == 2);
}

TEST_CASE("manifest writes a loadable corpus") {
  fixtures::TempDir dir;
  const std::string m = (dir / "m.jsonl").string();
  Run r = rpkg_cli({"manifest", "--corpus", fixtures::data("tree").string(), "--out", m});
  REQUIRE(r.code == 0);
  CHECK(r.out == "packages=8\n");
  const std::string g1 = (dir / "g1.json").string();
  const std::string g2 = (dir / "g2.json").string();
  REQUIRE(rpkg_cli({"build", "--corpus", m, "--vocab", fixtures::data("vocabulary.jsonl").string(),
                    "--out", g1})
              .code == 0);
  REQUIRE(rpkg_cli({"build", "--corpus", fixtures::data("tree").string(), "--vocab",
                    fixtures::data("vocabulary.jsonl").string(), "--out", g2})
              .code == 0);
  CHECK(fixtures::slurp(g1) == fixtures::slurp(g2));
}
