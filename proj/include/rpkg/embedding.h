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

#ifndef RPKG_EMBEDDING_H_
#define RPKG_EMBEDDING_H_

#include <Eigen/Core>
#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rpkg/error.h"

namespace rpkg {

template <typename Scalar>
using Embedding = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using EmbeddingVector = Embedding<double>;

inline constexpr int kFallbackDim = 256;

// Lowercases, maps every byte outside [a-z0-9] to a space, collapses
// space runs and trims.
std::string normalize_text(std::string_view s);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Signed character-trigram hashing embedder over normalize_text(s):
// each gram adds +1 (top hash bit clear) or -1 at index hash % 256; the
// result is L2-normalized unless it is zero. Strings shorter than three
// characters form a single gram.
EmbeddingVector fallback_embed(std::string_view s);

// dot(u, v) / (|u| |v|), or 0 if either norm is zero. Throws
// DimensionError when the sizes differ.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA> &u,
                                 const Eigen::MatrixBase<DerivedB> &v) {
  using Scalar = typename DerivedA::Scalar;
  if (u.size() != v.size()) {
    throw DimensionError("cannot compare embeddings of dimension " +
                         std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) return Scalar(0);
  return u.dot(v) / (nu * nv);
}

// Precomputed phrase vectors keyed by normalized text.
//
// File format: a header line "rpkg-emb v1 dim=<D>", then one line per
// entry: the normalized text, a tab, and D decimal numbers separated by
// single spaces.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(int dim);

  int dim() const { return dim_; }
  size_t size() const { return entries_.size(); }

  // Key must already be normalized; vector must have length dim().
  void insert(const std::string &key, EmbeddingVector vector);
  const EmbeddingVector *find(std::string_view normalized) const;

  std::string format() const;
  static EmbeddingStore parse(std::string_view text);
  static EmbeddingStore load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;

 private:
  int dim_;
  std::unordered_map<std::string, EmbeddingVector> entries_;
};

// Client for a remote embedding service:
//   POST <base>/embed {"texts": [...]}  ->  {"vectors": [[...], ...]}
class RemoteEmbedder {
 public:
  // base_url is "http://host[:port][/prefix]".
  explicit RemoteEmbedder(std::string base_url, double timeout_seconds = 5.0);

  const std::string &base_url() const { return base_url_; }

  // Throws Error on transport failure or a malformed response.
  std::vector<EmbeddingVector> embed(const std::vector<std::string> &texts) const;

 private:
  std::string base_url_;
  std::string host_;  // scheme://host:port
  std::string path_;  // prefix + "/embed"
  double timeout_seconds_;
};

enum class EmbeddingTier { kStore, kRemote, kFallback };
std::string_view embedding_tier_name(EmbeddingTier tier);

struct EmbeddedText {
  EmbeddingVector vector;
  EmbeddingTier tier;
};

// Resolves phrase embeddings through store -> remote -> fallback. Results
// are memoized per normalized text; remote failures degrade to the
// fallback with a warning. Thread-safe.
class EmbeddingProvider {
 public:
  using WarningSink = std::function<void(const std::string &)>;

  EmbeddingProvider() = default;
  EmbeddingProvider(std::shared_ptr<const EmbeddingStore> store,
                    std::optional<RemoteEmbedder> remote);

  // Remote tier from RPKG_EMBED_URL when `url` is empty.
  static std::unique_ptr<EmbeddingProvider> from_config(
      const std::optional<std::filesystem::path> &store_path,
      const std::optional<std::string> &url);

  void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }

  EmbeddedText embed_with_tier(std::string_view text) const;
  EmbeddingVector embed(std::string_view text) const { return embed_with_tier(text).vector; }

  const EmbeddingStore *store() const { return store_.get(); }
  bool has_remote() const { return remote_.has_value(); }

  // How many lookups each tier has answered (cache hits included).
  size_t tier_count(EmbeddingTier tier) const;

 private:
  std::shared_ptr<const EmbeddingStore> store_;
  std::optional<RemoteEmbedder> remote_;
  WarningSink warn_;

  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<std::string, EmbeddedText> cache_;
  mutable std::array<std::atomic<size_t>, 3> tier_counts_{};
};

}  // namespace rpkg

#endif  // RPKG_EMBEDDING_H_
