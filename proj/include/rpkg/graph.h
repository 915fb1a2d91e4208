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

#ifndef RPKG_GRAPH_H_
#define RPKG_GRAPH_H_

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpkg/extraction.h"

namespace rpkg {

enum class EntityType {
  kPackage,
  kRobot,
  kSensor,
  kCategory,
  kFunction,
  kCharacteristic,
  kAction,
  kNode,
  kService,
  kMessage,
  kLaunch,
};
inline constexpr size_t kEntityTypeCount = 11;

enum class RelationKind {
  kIsForDevice,
  kIsInCategory,
  kHasFunction,
  kHasCharacteristics,
  kIncludesAction,
  kIncludesNode,
  kIncludesService,
  kIncludesMessage,
  kIncludesLaunch,
};
inline constexpr size_t kRelationKindCount = 9;

std::string_view entity_type_name(EntityType t);
std::optional<EntityType> parse_entity_type(std::string_view s);
std::string_view relation_kind_name(RelationKind r);
std::optional<RelationKind> parse_relation_kind(std::string_view s);

// Robot, Sensor, Category, Function and Characteristic entities are shared
// between packages by case-insensitive name; the rest are per package.
bool is_shared_type(EntityType t);

using EntityId = std::uint64_t;

struct Entity {
  EntityId id = 0;
  EntityType type = EntityType::kPackage;
  std::string name;
  std::map<std::string, std::string> attrs;

  bool operator==(const Entity &) const = default;
};

struct Relation {
  EntityId src = 0;  // always a Package
  RelationKind rel = RelationKind::kIsInCategory;
  EntityId dst = 0;

  auto operator<=>(const Relation &) const = default;
};

struct GraphStats {
  std::array<size_t, kEntityTypeCount> entities{};
  std::array<size_t, kRelationKindCount> relations{};

  size_t total_entities() const;
  size_t total_relations() const;
  size_t entity_count(EntityType t) const { return entities[static_cast<size_t>(t)]; }
  size_t relation_count(RelationKind r) const { return relations[static_cast<size_t>(r)]; }
};

// The package knowledge graph. Immutable once built or loaded; all
// accessors are const and safe to call from many threads.
class Graph {
 public:
  Graph() = default;

  const std::vector<Entity> &entities() const { return entities_; }
  const std::vector<Relation> &relations() const { return relations_; }
  const Entity *find_entity(EntityId id) const;

  // Package names in ascending order.
  const std::vector<std::string> &package_names() const { return package_names_; }
  size_t package_count() const { return package_names_.size(); }
  bool has_package(std::string_view name) const;

  // Feature bundle rebuilt from the package's relations. Throws
  // NotFoundError for unknown packages.
  const PackageFeatures &package_view(std::string_view name) const;

  GraphStats stats() const;

  bool operator==(const Graph &other) const {
    return entities_ == other.entities_ && relations_ == other.relations_;
  }

 private:
  friend class GraphBuilder;
  friend Graph graph_from_parts(std::vector<Entity>, std::vector<Relation>);

  // Sorts, validates integrity and builds the package index.
  void freeze();

  std::vector<Entity> entities_;
  std::vector<Relation> relations_;
  std::unordered_map<EntityId, size_t> by_id_;
  std::vector<std::string> package_names_;
  std::map<std::string, PackageFeatures, std::less<>> views_;
};

// Single-writer builder. Entity ids are assigned sequentially from 1 in
// link order.
class GraphBuilder {
 public:
  // Throws BuildError if the package already exists.
  void link_features(const PackageFeatures &features);
  Graph finish() &&;

 private:
  EntityId add_entity(EntityType type, std::string name);
  EntityId shared_entity(EntityType type, const std::string &name);
  void relate(EntityId src, RelationKind rel, EntityId dst);

  Graph graph_;
  std::map<std::pair<EntityType, std::string>, EntityId> shared_;
  std::map<std::string, EntityId, std::less<>> packages_;
  std::vector<Relation> relation_order_;
  EntityId next_id_ = 1;
};

// Links packages in name order, features within a package in sorted order.
Graph build_graph(std::vector<PackageFeatures> features);

// Checks format, version and referential/typing integrity. Throws
// VersionError or IntegrityError.
Graph graph_from_parts(std::vector<Entity> entities, std::vector<Relation> relations);

std::string format_graph(const Graph &graph);
Graph parse_graph(std::string_view text);
void save_graph(const Graph &graph, const std::filesystem::path &path);
Graph load_graph(const std::filesystem::path &path);

inline constexpr std::string_view kGraphFormat = "rpkg-graph";
inline constexpr int kGraphVersion = 1;

}  // namespace rpkg

#endif  // RPKG_GRAPH_H_
