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

#include "rpkg/service.h"

#include "httplib.h"
#include "json_util.h"
#include "rpkg/error.h"

namespace rpkg {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr size_t kDefaultTopK = 10;

HttpReply error_reply(int status, const std::string &message) {
  return {status, dump_json(ordered_json{{"error", message}})};
}

}  // namespace

void ServiceConfig::validate() const {
  if (graph_path.empty()) throw QueryError("a graph path is required");
  if (port < 1 || port > 65535) throw QueryError("port must be in [1, 65535]");
  weights.validate();
}

std::string stats_json(const GraphStats &stats) {
  ordered_json entities = ordered_json::object();
  for (size_t i = 0; i < kEntityTypeCount; ++i) {
    entities[std::string(entity_type_name(static_cast<EntityType>(i)))] = stats.entities[i];
  }
  ordered_json relations = ordered_json::object();
  for (size_t i = 0; i < kRelationKindCount; ++i) {
    relations[std::string(relation_kind_name(static_cast<RelationKind>(i)))] =
        stats.relations[i];
  }
  ordered_json obj;
  obj["entities"] = entities;
  obj["relations"] = relations;
  obj["total_entities"] = stats.total_entities();
  obj["total_relations"] = stats.total_relations();
  return dump_json(obj);
}

SearchService::SearchService(std::shared_ptr<const Graph> graph,
                             std::shared_ptr<const EmbeddingProvider> provider,
                             WeightConfig weights)
    : graph_(std::move(graph)), provider_(std::move(provider)), weights_(weights) {}

HttpReply SearchService::search(std::string_view body) const {
  json obj = json::parse(body, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) return error_reply(400, "body must be a JSON object");

  size_t top_k = kDefaultTopK;
  if (auto it = obj.find("top_k"); it != obj.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) {
      return error_reply(400, "top_k must be a positive integer");
    }
    top_k = it->get<size_t>();
    obj.erase(it);
  }
  SearchQuery query;
  try {
    query = query_from_json(obj);
  } catch (const QueryError &e) {
    return error_reply(400, e.what());
  }

  try {
    auto results = ffs(*graph_, query, weights_, top_k, *provider_);
    ordered_json list = ordered_json::array();
    for (const auto &r : results) {
      ordered_json item;
      item["package"] = r.package;
      item["score"] = r.score;
      item["per_dimension"] = scores_to_json(r.per_dimension);
      list.push_back(std::move(item));
    }
    return {200, dump_json(ordered_json{{"results", list}})};
  } catch (const QueryError &e) {
    return error_reply(400, e.what());
  } catch (const Error &e) {
    return error_reply(500, e.what());
  }
}

HttpReply SearchService::package(std::string_view name) const {
  if (!graph_->has_package(name)) return error_reply(404, "not found");
  return {200, dump_json(features_to_json(graph_->package_view(name)))};
}

HttpReply SearchService::stats() const { return {200, stats_json(graph_->stats())}; }

HttpReply SearchService::health() const { return {200, "ok", "text/plain"}; }

void SearchService::mount(httplib::Server &server,
                          const std::optional<std::string> &static_dir) const {
  auto send = [](httplib::Response &res, const HttpReply &reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  server.Get("/healthz", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, health());
  });
  server.Get("/api/stats", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, stats());
  });
  server.Get(R"(/api/packages/([^/]+))",
             [this, send](const httplib::Request &req, httplib::Response &res) {
               send(res, package(httplib::detail::decode_url(req.matches[1], false)));
             });
  server.Post("/api/search", [this, send](const httplib::Request &req, httplib::Response &res) {
    send(res, search(req.body));
  });
  if (static_dir) server.set_mount_point("/", *static_dir);
}

}  // namespace rpkg
