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

#include "rpkg/embedding.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "httplib.h"
#include "json.hpp"
#include "json_util.h"
#include "rpkg/corpus.h"
#include "rpkg/text.h"

namespace rpkg {

using nlohmann::json;

std::string normalize_text(std::string_view s) {
  std::string mapped;
  mapped.reserve(s.size());
  for (char c : s) {
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    bool keep = (lower >= 'a' && lower <= 'z') || (lower >= '0' && lower <= '9');
    mapped.push_back(keep ? lower : ' ');
  }
  return collapse_whitespace(mapped);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

EmbeddingVector fallback_embed(std::string_view s) {
  EmbeddingVector v = EmbeddingVector::Zero(kFallbackDim);
  const std::string text = normalize_text(s);
  if (text.empty()) return v;

  auto add_gram = [&v](std::string_view gram) {
    const std::uint64_t h = fnv1a64(gram);
    const auto index = static_cast<Eigen::Index>(h % kFallbackDim);
    v[index] += (h >> 63) == 0 ? 1.0 : -1.0;
  };
  if (text.size() < 3) {
    add_gram(text);
  } else {
    for (size_t i = 0; i + 3 <= text.size(); ++i) {
      add_gram(std::string_view(text).substr(i, 3));
    }
  }
  const double norm = v.norm();
  if (norm > 0) v /= norm;
  return v;
}

// --- EmbeddingStore -------------------------------------------------------

EmbeddingStore::EmbeddingStore(int dim) : dim_(dim) {
  if (dim <= 0) throw ParseError("embedding dimension must be positive");
}

void EmbeddingStore::insert(const std::string &key, EmbeddingVector vector) {
  if (vector.size() != dim_) {
    throw DimensionError("store has dimension " + std::to_string(dim_) +
                         ", got a vector of " + std::to_string(vector.size()));
  }
  if (key.empty() || normalize_text(key) != key) {
    throw ParseError("store key '" + key + "' is not normalized");
  }
  if (!vector.allFinite()) throw ParseError("store vector for '" + key + "' is not finite");
  entries_[key] = std::move(vector);
}

const EmbeddingVector *EmbeddingStore::find(std::string_view normalized) const {
  auto it = entries_.find(std::string(normalized));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string EmbeddingStore::format() const {
  std::vector<const std::pair<const std::string, EmbeddingVector> *> sorted;
  for (const auto &e : entries_) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto *a, const auto *b) { return a->first < b->first; });

  std::string out = "rpkg-emb v1 dim=" + std::to_string(dim_) + "\n";
  char buf[64];
  for (const auto *e : sorted) {
    out += e->first;
    out += '\t';
    for (Eigen::Index i = 0; i < e->second.size(); ++i) {
      if (i > 0) out += ' ';
      auto res = std::to_chars(buf, buf + sizeof(buf), e->second[i]);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

EmbeddingStore EmbeddingStore::parse(std::string_view text) {
  auto lines = split(text, '\n');
  const std::string header = trim(lines.empty() ? "" : lines[0]);
  const std::string prefix = "rpkg-emb v1 dim=";
  if (header.rfind(prefix, 0) != 0) {
    throw ParseError("embedding store: bad header '" + header + "'");
  }
  int dim = 0;
  const std::string dim_str = header.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(dim_str.data(), dim_str.data() + dim_str.size(), dim);
  if (ec != std::errc() || ptr != dim_str.data() + dim_str.size() || dim <= 0) {
    throw ParseError("embedding store: bad dimension '" + dim_str + "'");
  }

  EmbeddingStore store(dim);
  for (size_t n = 1; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = "embedding store line " + std::to_string(n + 1) + ": ";
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(where + "missing tab");
    std::string key(line.substr(0, tab));
    auto fields = split(line.substr(tab + 1), ' ');
    if (static_cast<int>(fields.size()) != dim) {
      throw ParseError(where + "expected " + std::to_string(dim) + " values, got " +
                       std::to_string(fields.size()));
    }
    EmbeddingVector v(dim);
    for (int i = 0; i < dim; ++i) {
      const std::string &f = fields[static_cast<size_t>(i)];
      double value = 0;
      auto r = std::from_chars(f.data(), f.data() + f.size(), value);
      if (r.ec != std::errc() || r.ptr != f.data() + f.size()) {
        throw ParseError(where + "bad number '" + f + "'");
      }
      v[i] = value;
    }
    if (store.find(key)) throw ParseError(where + "duplicate key '" + key + "'");
    try {
      store.insert(key, std::move(v));
    } catch (const Error &e) {
      throw ParseError(where + e.what());
    }
  }
  return store;
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path &path) {
  return parse(read_file(path));
}

void EmbeddingStore::save(const std::filesystem::path &path) const {
  write_file_atomic(path, format());
}

// --- RemoteEmbedder -------------------------------------------------------

RemoteEmbedder::RemoteEmbedder(std::string base_url, double timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
  size_t scheme = base_url_.find("://");
  if (scheme == std::string::npos) {
    throw Error("embedding service URL needs a scheme: " + base_url_);
  }
  size_t slash = base_url_.find('/', scheme + 3);
  host_ = base_url_.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : base_url_.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/embed";
}

std::vector<EmbeddingVector> RemoteEmbedder::embed(const std::vector<std::string> &texts) const {
  httplib::Client client(host_);
  const auto secs = static_cast<time_t>(timeout_seconds_);
  const auto usecs = static_cast<time_t>((timeout_seconds_ - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);

  json body = {{"texts", texts}};
  auto res = client.Post(path_, dump_json(body), "application/json");
  if (!res) {
    throw Error("embedding service " + base_url_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error("embedding service " + base_url_ + ": HTTP " + std::to_string(res->status));
  }
  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("vectors") || !reply["vectors"].is_array() ||
      reply["vectors"].size() != texts.size()) {
    throw Error("embedding service " + base_url_ + ": malformed response");
  }
  std::vector<EmbeddingVector> out;
  for (const auto &row : reply["vectors"]) {
    if (!row.is_array() || row.empty()) throw Error("embedding service: malformed vector");
    EmbeddingVector v(static_cast<Eigen::Index>(row.size()));
    for (size_t i = 0; i < row.size(); ++i) {
      if (!row[i].is_number()) throw Error("embedding service: malformed vector");
      v[static_cast<Eigen::Index>(i)] = row[i].get<double>();
    }
    if (!v.allFinite()) throw Error("embedding service: non-finite vector");
    out.push_back(std::move(v));
  }
  return out;
}

// --- EmbeddingProvider ----------------------------------------------------

std::string_view embedding_tier_name(EmbeddingTier tier) {
  switch (tier) {
    case EmbeddingTier::kStore: return "store";
    case EmbeddingTier::kRemote: return "remote";
    case EmbeddingTier::kFallback: return "fallback";
  }
  return "fallback";
}

EmbeddingProvider::EmbeddingProvider(std::shared_ptr<const EmbeddingStore> store,
                                     std::optional<RemoteEmbedder> remote)
    : store_(std::move(store)), remote_(std::move(remote)) {}

std::unique_ptr<EmbeddingProvider> EmbeddingProvider::from_config(
    const std::optional<std::filesystem::path> &store_path,
    const std::optional<std::string> &url) {
  std::shared_ptr<const EmbeddingStore> store;
  if (store_path) store = std::make_shared<EmbeddingStore>(EmbeddingStore::load(*store_path));
  std::optional<RemoteEmbedder> remote;
  if (url && !url->empty()) {
    remote.emplace(*url);
  } else if (const char *env = std::getenv("RPKG_EMBED_URL"); env && *env) {
    remote.emplace(env);
  }
  return std::make_unique<EmbeddingProvider>(std::move(store), std::move(remote));
}

EmbeddedText EmbeddingProvider::embed_with_tier(std::string_view text) const {
  const std::string key = normalize_text(text);
  {
    std::shared_lock lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++tier_counts_[static_cast<size_t>(it->second.tier)];
      return it->second;
    }
  }

  std::optional<EmbeddedText> result;
  if (store_) {
    if (const EmbeddingVector *v = store_->find(key)) {
      result = EmbeddedText{*v, EmbeddingTier::kStore};
    }
  }
  if (!result && remote_ && !key.empty()) {
    try {
      auto vectors = remote_->embed({key});
      result = EmbeddedText{std::move(vectors.front()), EmbeddingTier::kRemote};
    } catch (const Error &e) {
      std::string msg = std::string(e.what()) + "; using fallback embedding";
      if (warn_) {
        warn_(msg);
      } else {
        std::cerr << "warning: " << msg << "\n";
      }
    }
  }
  if (!result) result = EmbeddedText{fallback_embed(key), EmbeddingTier::kFallback};

  ++tier_counts_[static_cast<size_t>(result->tier)];
  std::unique_lock lock(cache_mutex_);
  cache_.emplace(key, *result);
  return *result;
}

size_t EmbeddingProvider::tier_count(EmbeddingTier tier) const {
  return tier_counts_[static_cast<size_t>(tier)].load();
}

}  // namespace rpkg
