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

#ifndef RPKG_SERVICE_H_
#define RPKG_SERVICE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rpkg/embedding.h"
#include "rpkg/graph.h"
#include "rpkg/search.h"

namespace httplib {
class Server;
}

namespace rpkg {

struct ServiceConfig {
  std::string graph_path;
  std::optional<std::string> embedding_store_path;
  std::optional<std::string> remote_embed_url;
  int port = 8080;
  std::optional<std::string> static_dir;
  WeightConfig weights;

  // Throws QueryError on an empty graph path or a port outside [1, 65535].
  void validate() const;
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// HTTP API over one immutable graph. Handlers are stateless and may run
// concurrently.
//
//   POST /api/search          ten optional query fields + top_k
//   GET  /api/packages/{name} extracted feature view
//   GET  /api/stats           entity and relation counts
//   GET  /healthz             "ok"
class SearchService {
 public:
  SearchService(std::shared_ptr<const Graph> graph,
                std::shared_ptr<const EmbeddingProvider> provider,
                WeightConfig weights = {});

  HttpReply search(std::string_view body) const;
  HttpReply package(std::string_view name) const;
  HttpReply stats() const;
  HttpReply health() const;

  // Registers the routes (and static files, if given) on `server`.
  void mount(httplib::Server &server, const std::optional<std::string> &static_dir = {}) const;

 private:
  std::shared_ptr<const Graph> graph_;
  std::shared_ptr<const EmbeddingProvider> provider_;
  WeightConfig weights_;
};

// JSON body shared by /api/stats and `rpkg stats --format json`.
std::string stats_json(const GraphStats &stats);

}  // namespace rpkg

#endif  // RPKG_SERVICE_H_
