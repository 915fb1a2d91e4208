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

#include "rpkg/cli.h"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json_util.h"
#include "rpkg/corpus.h"
#include "rpkg/error.h"
#include "rpkg/eval.h"
#include "rpkg/extraction.h"
#include "rpkg/graph.h"
#include "rpkg/search.h"
#include "rpkg/service.h"
#include "rpkg/text.h"

// After Eigen: <resolv.h> defines _res.
#include "httplib.h"

namespace rpkg {

namespace {

using nlohmann::ordered_json;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Raised inside command bodies to leave with a specific exit code.
struct ExitWith {
  int code;
  std::string message;
};

Graph load_graph_or_exit(const std::string &path) {
  try {
    return load_graph(path);
  } catch (const Error &e) {
    throw ExitWith{kExitUsage, "cannot load graph " + path + ": " + e.what()};
  }
}

std::unique_ptr<EmbeddingProvider> provider_or_exit(const std::string &store,
                                                    const std::string &url) {
  try {
    return EmbeddingProvider::from_config(
        store.empty() ? std::nullopt : std::optional<std::filesystem::path>(store),
        url.empty() ? std::nullopt : std::optional<std::string>(url));
  } catch (const Error &e) {
    throw ExitWith{kExitUsage, std::string("cannot load embeddings: ") + e.what()};
  }
}

struct WeightFlags {
  double function = 0.8;
  double characteristics = 0.8;

  void add_to(CLI::App *cmd) {
    cmd->add_option("--weight-function", function, "Weight of the function dimension");
    cmd->add_option("--weight-characteristics", characteristics,
                    "Weight of the characteristics dimension");
  }

  WeightConfig config() const {
    WeightConfig w;
    w[Dimension::kFunction] = function;
    w[Dimension::kCharacteristics] = characteristics;
    try {
      w.validate();
    } catch (const QueryError &e) {
      throw ExitWith{kExitUsage, e.what()};
    }
    return w;
  }
};

// --- build ----------------------------------------------------------------

struct BuildArgs {
  std::string corpus, vocab, out, embeddings, dump_features;
};

int cmd_build(const BuildArgs &a, std::ostream &out, std::ostream &err) {
  try {
    HardwareVocabulary vocab = load_vocabulary(a.vocab);
    auto records = load_corpus(a.corpus, [&err](const std::string &m) {
      err << "warning: " << m << "\n";
    });
    auto features = extract_corpus(records, vocab);
    if (!a.dump_features.empty()) write_features(features, a.dump_features);
    Graph graph = build_graph(features);
    save_graph(graph, a.out);

    GraphStats stats = graph.stats();
    out << "packages=" << graph.package_count() << " entities=" << stats.total_entities()
        << " relations=" << stats.total_relations() << "\n";
    if (!a.embeddings.empty()) {
      EmbeddingStore store = EmbeddingStore::load(a.embeddings);
      size_t phrases = 0, covered = 0;
      for (const auto &e : graph.entities()) {
        if (e.type != EntityType::kFunction && e.type != EntityType::kCharacteristic) continue;
        ++phrases;
        if (store.find(normalize_text(e.name))) ++covered;
      }
      out << "embeddings: dim=" << store.dim() << " covered=" << covered << "/" << phrases
          << "\n";
    }
    return kExitOk;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

// --- search ---------------------------------------------------------------

struct SearchArgs {
  std::string graph, embeddings, embed_url;
  std::map<std::string, std::string> fields;
  size_t top = 10;
  std::string format = "table";
  WeightFlags weights;
};

int cmd_search(const SearchArgs &a, std::ostream &out) {
  std::map<std::string, std::string> fields;
  for (const auto &[k, v] : a.fields) {
    if (!trim_view(v).empty()) fields[k] = v;
  }
  if (fields.empty()) {
    throw ExitWith{kExitUsage, "search needs at least one query field (--robot, --function, ...)"};
  }
  SearchQuery query;
  try {
    query = parse_query(fields);
  } catch (const QueryError &e) {
    throw ExitWith{kExitUsage, e.what()};
  }
  WeightConfig weights = a.weights.config();
  Graph graph = load_graph_or_exit(a.graph);
  auto provider = provider_or_exit(a.embeddings, a.embed_url);

  auto results = ffs(graph, query, weights, a.top, *provider);
  if (a.format == "json") {
    ordered_json list = ordered_json::array();
    for (const auto &r : results) {
      list.push_back({{"package", r.package},
                      {"score", r.score},
                      {"per_dimension", scores_to_json(r.per_dimension)}});
    }
    out << dump_json(list, 2) << "\n";
    return kExitOk;
  }
  out << "rank\tpackage\tscore\tmatched\n";
  for (size_t i = 0; i < results.size(); ++i) {
    std::string matched;
    for (const auto &[d, s] : results[i].per_dimension) {
      if (s <= 0) continue;
      if (!matched.empty()) matched += ',';
      matched += std::string(dimension_name(d)) + "=" + fixed4(s);
    }
    out << i + 1 << "\t" << results[i].package << "\t" << fixed4(results[i].score) << "\t"
        << (matched.empty() ? "-" : matched) << "\n";
  }
  return kExitOk;
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string graph, queries, levels = "1,5,10,15,20", ablate, out, format = "json";
  std::string embeddings, embed_url;
  std::optional<size_t> sample_size;
  std::uint64_t seed = 0;
  WeightFlags weights;
};

std::vector<size_t> parse_levels(const std::string &spec) {
  std::vector<size_t> levels;
  for (const auto &part : split(spec, ',')) {
    std::string t = trim(part);
    size_t value = 0;
    try {
      size_t used = 0;
      long long v = std::stoll(t, &used);
      if (used != t.size() || v <= 0) throw std::invalid_argument(t);
      value = static_cast<size_t>(v);
    } catch (const std::exception &) {
      throw ExitWith{kExitUsage, "bad --levels entry '" + t + "'"};
    }
    levels.push_back(value);
  }
  return levels;
}

int cmd_eval(const EvalArgs &a, std::ostream &out) {
  EvalConfig config;
  config.weights = a.weights.config();
  config.sample_size = a.sample_size;
  config.seed = a.seed;
  if (!a.ablate.empty()) {
    config.ablate = parse_dimension(a.ablate);
    if (!config.ablate) throw ExitWith{kExitUsage, "unknown dimension '" + a.ablate + "'"};
  }
  const auto levels = parse_levels(a.levels);
  std::vector<LabeledQuery> queries;
  try {
    queries = load_queries(a.queries);
  } catch (const Error &e) {
    throw ExitWith{kExitUsage, "cannot load queries " + a.queries + ": " + e.what()};
  }
  Graph graph = load_graph_or_exit(a.graph);
  auto provider = provider_or_exit(a.embeddings, a.embed_url);

  EvalReport report;
  try {
    report = run_eval(graph, queries, levels, config, *provider);
  } catch (const Error &e) {
    throw ExitWith{kExitUsage, e.what()};
  }

  out << "queries=" << report.per_query.size();
  if (config.ablate) out << " ablated=" << dimension_name(*config.ablate);
  if (config.sample_size) out << " sample_size=" << *config.sample_size << " seed=" << config.seed;
  out << "\n";
  for (const auto &[k, v] : report.accuracy_at) out << "top@" << k << "\t" << fixed4(v) << "\n";

  if (!a.out.empty()) {
    try {
      write_report(report, a.out, a.format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson);
    } catch (const Error &e) {
      throw ExitWith{kExitFailure, e.what()};
    }
  }
  return kExitOk;
}

// --- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string graph, static_dir, embeddings, embed_url, host = "0.0.0.0";
  int port = 8080;
  WeightFlags weights;
};

int cmd_serve(const ServeArgs &a, std::ostream &out) {
  ServiceConfig config;
  config.graph_path = a.graph;
  config.port = a.port;
  if (!a.static_dir.empty()) config.static_dir = a.static_dir;
  if (!a.embeddings.empty()) config.embedding_store_path = a.embeddings;
  if (!a.embed_url.empty()) config.remote_embed_url = a.embed_url;
  config.weights = a.weights.config();
  try {
    config.validate();
  } catch (const QueryError &e) {
    throw ExitWith{kExitUsage, e.what()};
  }

  auto graph = std::make_shared<const Graph>(load_graph_or_exit(config.graph_path));
  std::shared_ptr<const EmbeddingProvider> provider =
      provider_or_exit(a.embeddings, a.embed_url);
  SearchService service(graph, provider, config.weights);

  httplib::Server server;
  // httplib defaults to SO_REUSEPORT, which lets a second server share a
  // busy port silently.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  service.mount(server, config.static_dir);
  if (!server.bind_to_port(a.host, config.port)) {
    throw ExitWith{kExitFailure, "cannot bind " + a.host + ":" + std::to_string(config.port)};
  }
  out << "serving " << graph->package_count() << " packages on " << a.host << ":"
      << config.port << std::endl;
  if (!server.listen_after_bind()) throw ExitWith{kExitFailure, "server stopped unexpectedly"};
  return kExitOk;
}

// --- stats ----------------------------------------------------------------

int cmd_stats(const std::string &graph_path, const std::string &format, std::ostream &out) {
  Graph graph = load_graph_or_exit(graph_path);
  GraphStats stats = graph.stats();
  if (format == "json") {
    out << stats_json(stats) << "\n";
    return kExitOk;
  }
  for (size_t i = 0; i < kEntityTypeCount; ++i) {
    out << "entity\t" << entity_type_name(static_cast<EntityType>(i)) << "\t"
        << stats.entities[i] << "\n";
  }
  for (size_t i = 0; i < kRelationKindCount; ++i) {
    out << "relation\t" << relation_kind_name(static_cast<RelationKind>(i)) << "\t"
        << stats.relations[i] << "\n";
  }
  out << "entities=" << stats.total_entities() << " relations=" << stats.total_relations()
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Semantic search over ROS package knowledge graphs", "rpkg"};
  app.require_subcommand(1);

  BuildArgs build;
  auto *build_cmd = app.add_subcommand("build", "Extract features and build the graph");
  build_cmd->add_option("--corpus", build.corpus, "Corpus directory or manifest")->required();
  build_cmd->add_option("--vocab", build.vocab, "Hardware vocabulary (JSONL)")->required();
  build_cmd->add_option("--out", build.out, "Graph file to write")->required();
  build_cmd->add_option("--embeddings", build.embeddings, "Embedding store to check coverage of");
  build_cmd->add_option("--dump-features", build.dump_features, "Write extracted features (JSONL)");

  SearchArgs search;
  auto *search_cmd = app.add_subcommand("search", "Rank packages against a query");
  search_cmd->add_option("--graph", search.graph, "Graph file")->required();
  for (Dimension d : kAllDimensions) {
    const std::string name(dimension_name(d));
    search_cmd->add_option("--" + name, search.fields[name], "Query " + name);
  }
  search_cmd->add_option("--top", search.top, "Number of results")->check(CLI::PositiveNumber);
  search_cmd->add_option("--format", search.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  search_cmd->add_option("--embeddings", search.embeddings, "Embedding store");
  search_cmd->add_option("--embed-url", search.embed_url, "Remote embedding service");
  search.weights.add_to(search_cmd);

  EvalArgs eval;
  auto *eval_cmd = app.add_subcommand("eval", "Measure top@K accuracy on labeled queries");
  eval_cmd->add_option("--graph", eval.graph, "Graph file")->required();
  eval_cmd->add_option("--queries", eval.queries, "Labeled queries (JSONL)")->required();
  eval_cmd->add_option("--levels", eval.levels, "Comma-separated K values");
  eval_cmd->add_option("--ablate", eval.ablate, "Dimension removed from every query");
  eval_cmd->add_option("--sample-size", eval.sample_size, "Evaluate a seeded sample");
  eval_cmd->add_option("--seed", eval.seed, "Sampling seed");
  eval_cmd->add_option("--out", eval.out, "Report file");
  eval_cmd->add_option("--format", eval.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  eval_cmd->add_option("--embeddings", eval.embeddings, "Embedding store");
  eval_cmd->add_option("--embed-url", eval.embed_url, "Remote embedding service");
  eval.weights.add_to(eval_cmd);

  ServeArgs serve;
  auto *serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--graph", serve.graph, "Graph file")->required();
  serve_cmd->add_option("--port", serve.port, "Port");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--static", serve.static_dir, "Directory of UI assets");
  serve_cmd->add_option("--embeddings", serve.embeddings, "Embedding store");
  serve_cmd->add_option("--embed-url", serve.embed_url, "Remote embedding service");
  serve.weights.add_to(serve_cmd);

  std::string stats_graph, stats_format = "table";
  auto *stats_cmd = app.add_subcommand("stats", "Print entity and relation counts");
  stats_cmd->add_option("--graph", stats_graph, "Graph file")->required();
  stats_cmd->add_option("--format", stats_format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));

  std::string manifest_corpus, manifest_out;
  auto *manifest_cmd =
      app.add_subcommand("manifest", "Scan a corpus directory into a manifest file");
  manifest_cmd->add_option("--corpus", manifest_corpus, "Corpus directory")->required();
  manifest_cmd->add_option("--out", manifest_out, "Manifest file to write")->required();

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    const CLI::App *sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*build_cmd) return cmd_build(build, out, err);
    if (*search_cmd) return cmd_search(search, out);
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*serve_cmd) return cmd_serve(serve, out);
    if (*stats_cmd) return cmd_stats(stats_graph, stats_format, out);
    if (*manifest_cmd) {
      try {
        auto records = scan_tree(manifest_corpus, [&err](const std::string &m) {
          err << "warning: " << m << "\n";
        });
        write_manifest(records, manifest_out);
        out << "packages=" << records.size() << "\n";
        return kExitOk;
      } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
      }
    }
  } catch (const ExitWith &e) {
    err << "error: " << e.message << "\n";
    if (e.code == kExitUsage && *search_cmd && search.fields.size() > 0) {
      bool any = false;
      for (const auto &[k, v] : search.fields) any = any || !trim_view(v).empty();
      if (!any) err << search_cmd->help();
    }
    return e.code;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rpkg
