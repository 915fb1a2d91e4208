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

#include "rpkg/graph.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"
#include "json_util.h"
#include "rpkg/error.h"
#include "rpkg/text.h"

namespace rpkg {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, kEntityTypeCount> kEntityTypeNames = {
    "Package", "Robot", "Sensor",  "Category", "Function", "Characteristic",
    "Action",  "Node",  "Service", "Message",  "Launch"};

constexpr std::array<std::string_view, kRelationKindCount> kRelationNames = {
    "is_for_device",    "is_in_category",   "has_function",
    "has_characteristics", "includes_action", "includes_node",
    "includes_service", "includes_message", "includes_launch"};

bool relation_accepts(RelationKind rel, EntityType dst) {
  switch (rel) {
    case RelationKind::kIsForDevice:
      return dst == EntityType::kRobot || dst == EntityType::kSensor;
    case RelationKind::kIsInCategory: return dst == EntityType::kCategory;
    case RelationKind::kHasFunction: return dst == EntityType::kFunction;
    case RelationKind::kHasCharacteristics: return dst == EntityType::kCharacteristic;
    case RelationKind::kIncludesAction: return dst == EntityType::kAction;
    case RelationKind::kIncludesNode: return dst == EntityType::kNode;
    case RelationKind::kIncludesService: return dst == EntityType::kService;
    case RelationKind::kIncludesMessage: return dst == EntityType::kMessage;
    case RelationKind::kIncludesLaunch: return dst == EntityType::kLaunch;
  }
  return false;
}

std::set<std::string> *feature_slot(PackageFeatures &f, RelationKind rel,
                                    EntityType dst) {
  switch (rel) {
    case RelationKind::kIsForDevice:
      return dst == EntityType::kRobot ? &f.robots : &f.sensors;
    case RelationKind::kHasFunction: return &f.functions;
    case RelationKind::kHasCharacteristics: return &f.characteristics;
    case RelationKind::kIncludesAction: return &f.code.actions;
    case RelationKind::kIncludesNode: return &f.code.nodes;
    case RelationKind::kIncludesService: return &f.code.services;
    case RelationKind::kIncludesMessage: return &f.code.messages;
    case RelationKind::kIncludesLaunch: return &f.code.launches;
    case RelationKind::kIsInCategory: return nullptr;
  }
  return nullptr;
}

std::string id_str(EntityId id) { return std::to_string(id); }

}  // namespace

std::string_view entity_type_name(EntityType t) {
  return kEntityTypeNames[static_cast<size_t>(t)];
}

std::optional<EntityType> parse_entity_type(std::string_view s) {
  for (size_t i = 0; i < kEntityTypeNames.size(); ++i) {
    if (kEntityTypeNames[i] == s) return static_cast<EntityType>(i);
  }
  return std::nullopt;
}

std::string_view relation_kind_name(RelationKind r) {
  return kRelationNames[static_cast<size_t>(r)];
}

std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  for (size_t i = 0; i < kRelationNames.size(); ++i) {
    if (kRelationNames[i] == s) return static_cast<RelationKind>(i);
  }
  return std::nullopt;
}

bool is_shared_type(EntityType t) {
  switch (t) {
    case EntityType::kRobot:
    case EntityType::kSensor:
    case EntityType::kCategory:
    case EntityType::kFunction:
    case EntityType::kCharacteristic:
      return true;
    default:
      return false;
  }
}

size_t GraphStats::total_entities() const {
  return std::accumulate(entities.begin(), entities.end(), size_t{0});
}

size_t GraphStats::total_relations() const {
  return std::accumulate(relations.begin(), relations.end(), size_t{0});
}

const Entity *Graph::find_entity(EntityId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

bool Graph::has_package(std::string_view name) const {
  return views_.find(name) != views_.end();
}

const PackageFeatures &Graph::package_view(std::string_view name) const {
  auto it = views_.find(name);
  if (it == views_.end()) throw NotFoundError("unknown package '" + std::string(name) + "'");
  return it->second;
}

GraphStats Graph::stats() const {
  GraphStats s;
  for (const auto &e : entities_) ++s.entities[static_cast<size_t>(e.type)];
  for (const auto &r : relations_) ++s.relations[static_cast<size_t>(r.rel)];
  return s;
}

void Graph::freeze() {
  std::sort(entities_.begin(), entities_.end(),
            [](const Entity &a, const Entity &b) { return a.id < b.id; });
  std::sort(relations_.begin(), relations_.end());

  by_id_.clear();
  std::set<std::pair<EntityType, std::string>> shared_names;
  std::map<std::string, EntityId, std::less<>> packages;
  for (size_t i = 0; i < entities_.size(); ++i) {
    const Entity &e = entities_[i];
    if (!by_id_.emplace(e.id, i).second) {
      throw IntegrityError("duplicate entity id " + id_str(e.id));
    }
    if (e.name.empty()) throw IntegrityError("entity " + id_str(e.id) + " has an empty name");
    if (is_shared_type(e.type) &&
        !shared_names.emplace(e.type, to_lower(e.name)).second) {
      throw IntegrityError("duplicate " + std::string(entity_type_name(e.type)) +
                           " entity '" + e.name + "'");
    }
    if (e.type == EntityType::kCategory && !parse_category(e.name)) {
      throw IntegrityError("unknown category entity '" + e.name + "'");
    }
    if (e.type == EntityType::kPackage && !packages.emplace(e.name, e.id).second) {
      throw IntegrityError("duplicate package '" + e.name + "'");
    }
  }

  std::map<EntityId, PackageFeatures> by_package;
  std::map<EntityId, int> category_count;
  for (const auto &[name, id] : packages) {
    by_package[id].package = name;
    category_count[id] = 0;
  }
  for (size_t i = 0; i < relations_.size(); ++i) {
    const Relation &r = relations_[i];
    if (i > 0 && relations_[i - 1] == r) {
      throw IntegrityError("duplicate relation " + id_str(r.src) + " " +
                           std::string(relation_kind_name(r.rel)) + " " + id_str(r.dst));
    }
    const Entity *src = find_entity(r.src);
    const Entity *dst = find_entity(r.dst);
    if (!src || !dst) {
      throw IntegrityError("relation " + id_str(r.src) + " -> " + id_str(r.dst) +
                           " has a dangling endpoint");
    }
    if (src->type != EntityType::kPackage) {
      throw IntegrityError("relation source " + id_str(r.src) + " is not a Package");
    }
    if (!relation_accepts(r.rel, dst->type)) {
      throw IntegrityError(std::string(relation_kind_name(r.rel)) + " cannot target a " +
                           std::string(entity_type_name(dst->type)));
    }
    PackageFeatures &view = by_package[r.src];
    if (r.rel == RelationKind::kIsInCategory) {
      ++category_count[r.src];
      view.category = *parse_category(dst->name);
    } else {
      feature_slot(view, r.rel, dst->type)->insert(dst->name);
    }
  }
  for (const auto &[id, count] : category_count) {
    if (count != 1) {
      throw IntegrityError("package '" + by_package[id].package + "' has " +
                           std::to_string(count) + " categories");
    }
  }

  views_.clear();
  package_names_.clear();
  for (auto &[id, view] : by_package) {
    package_names_.push_back(view.package);
    views_.emplace(view.package, std::move(view));
  }
  std::sort(package_names_.begin(), package_names_.end());
}

EntityId GraphBuilder::add_entity(EntityType type, std::string name) {
  Entity e;
  e.id = next_id_++;
  e.type = type;
  e.name = std::move(name);
  graph_.entities_.push_back(std::move(e));
  return graph_.entities_.back().id;
}

EntityId GraphBuilder::shared_entity(EntityType type, const std::string &name) {
  auto key = std::make_pair(type, to_lower(name));
  if (auto it = shared_.find(key); it != shared_.end()) return it->second;
  EntityId id = add_entity(type, name);
  shared_.emplace(std::move(key), id);
  return id;
}

void GraphBuilder::relate(EntityId src, RelationKind rel, EntityId dst) {
  Relation r{src, rel, dst};
  // Case variants of one phrase inside a package collapse onto one edge.
  if (std::find(relation_order_.begin(), relation_order_.end(), r) == relation_order_.end()) {
    relation_order_.push_back(r);
  }
}

void GraphBuilder::link_features(const PackageFeatures &f) {
  if (f.package.empty()) throw BuildError("package with an empty name");
  if (packages_.count(f.package)) throw BuildError("duplicate package '" + f.package + "'");
  relation_order_.clear();

  const EntityId pkg = add_entity(EntityType::kPackage, f.package);
  packages_.emplace(f.package, pkg);

  auto link_shared = [&](const std::set<std::string> &names, EntityType type,
                         RelationKind rel) {
    for (const auto &n : names) {
      if (!trim_view(n).empty()) relate(pkg, rel, shared_entity(type, n));
    }
  };
  auto link_owned = [&](const std::set<std::string> &names, EntityType type,
                        RelationKind rel) {
    for (const auto &n : names) {
      if (!trim_view(n).empty()) relate(pkg, rel, add_entity(type, n));
    }
  };

  link_shared(f.robots, EntityType::kRobot, RelationKind::kIsForDevice);
  link_shared(f.sensors, EntityType::kSensor, RelationKind::kIsForDevice);
  relate(pkg, RelationKind::kIsInCategory,
         shared_entity(EntityType::kCategory, category_label(f.category)));
  link_shared(f.functions, EntityType::kFunction, RelationKind::kHasFunction);
  link_shared(f.characteristics, EntityType::kCharacteristic,
              RelationKind::kHasCharacteristics);
  link_owned(f.code.actions, EntityType::kAction, RelationKind::kIncludesAction);
  link_owned(f.code.nodes, EntityType::kNode, RelationKind::kIncludesNode);
  link_owned(f.code.services, EntityType::kService, RelationKind::kIncludesService);
  link_owned(f.code.messages, EntityType::kMessage, RelationKind::kIncludesMessage);
  link_owned(f.code.launches, EntityType::kLaunch, RelationKind::kIncludesLaunch);

  graph_.relations_.insert(graph_.relations_.end(), relation_order_.begin(),
                           relation_order_.end());
}

Graph GraphBuilder::finish() && {
  graph_.freeze();
  return std::move(graph_);
}

Graph build_graph(std::vector<PackageFeatures> features) {
  std::sort(features.begin(), features.end(),
            [](const PackageFeatures &a, const PackageFeatures &b) {
              return a.package < b.package;
            });
  GraphBuilder builder;
  for (const auto &f : features) builder.link_features(f);
  return std::move(builder).finish();
}

Graph graph_from_parts(std::vector<Entity> entities, std::vector<Relation> relations) {
  Graph g;
  g.entities_ = std::move(entities);
  g.relations_ = std::move(relations);
  g.freeze();
  return g;
}

std::string format_graph(const Graph &graph) {
  ordered_json doc;
  doc["format"] = kGraphFormat;
  doc["version"] = kGraphVersion;
  ordered_json entities = ordered_json::array();
  for (const auto &e : graph.entities()) {
    ordered_json obj;
    obj["id"] = e.id;
    obj["type"] = entity_type_name(e.type);
    obj["name"] = e.name;
    if (!e.attrs.empty()) obj["attrs"] = e.attrs;
    entities.push_back(std::move(obj));
  }
  ordered_json relations = ordered_json::array();
  for (const auto &r : graph.relations()) {
    ordered_json obj;
    obj["src"] = r.src;
    obj["rel"] = relation_kind_name(r.rel);
    obj["dst"] = r.dst;
    relations.push_back(std::move(obj));
  }
  doc["entities"] = std::move(entities);
  doc["relations"] = std::move(relations);
  return dump_json(doc, 1) + "\n";
}

Graph parse_graph(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ParseError("graph file is not valid JSON");
  if (doc.value("format", "") != kGraphFormat) {
    throw VersionError("not an rpkg-graph document");
  }
  auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer() ||
      version->get<int>() != kGraphVersion) {
    throw VersionError("unsupported graph version " +
                       (version == doc.end() ? std::string("<missing>") : version->dump()));
  }
  auto entities_it = doc.find("entities");
  auto relations_it = doc.find("relations");
  if (entities_it == doc.end() || !entities_it->is_array() || relations_it == doc.end() ||
      !relations_it->is_array()) {
    throw ParseError("graph file needs 'entities' and 'relations' arrays");
  }

  std::vector<Entity> entities;
  for (const auto &obj : *entities_it) {
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_number_unsigned() ||
        !obj.contains("type") || !obj["type"].is_string() || !obj.contains("name") ||
        !obj["name"].is_string()) {
      throw ParseError("malformed entity " + obj.dump());
    }
    auto type = parse_entity_type(obj["type"].get<std::string>());
    if (!type) throw IntegrityError("unknown entity type " + obj["type"].dump());
    Entity e;
    e.id = obj["id"].get<EntityId>();
    e.type = *type;
    e.name = obj["name"].get<std::string>();
    if (auto attrs = obj.find("attrs"); attrs != obj.end()) {
      if (!attrs->is_object()) throw ParseError("entity attrs must be an object");
      for (const auto &item : attrs->items()) {
        if (!item.value().is_string()) throw ParseError("entity attrs must be strings");
        e.attrs[item.key()] = item.value().get<std::string>();
      }
    }
    entities.push_back(std::move(e));
  }
  std::vector<Relation> relations;
  for (const auto &obj : *relations_it) {
    if (!obj.is_object() || !obj.contains("src") || !obj["src"].is_number_unsigned() ||
        !obj.contains("dst") || !obj["dst"].is_number_unsigned() || !obj.contains("rel") ||
        !obj["rel"].is_string()) {
      throw ParseError("malformed relation " + obj.dump());
    }
    auto rel = parse_relation_kind(obj["rel"].get<std::string>());
    if (!rel) throw IntegrityError("unknown relation kind " + obj["rel"].dump());
    relations.push_back({obj["src"].get<EntityId>(), *rel, obj["dst"].get<EntityId>()});
  }
  return graph_from_parts(std::move(entities), std::move(relations));
}

void save_graph(const Graph &graph, const std::filesystem::path &path) {
  write_file_atomic(path, format_graph(graph));
}

Graph load_graph(const std::filesystem::path &path) {
  return parse_graph(read_file(path));
}

}  // namespace rpkg
