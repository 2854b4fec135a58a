// Copyright 2026 The Actionable Authors.
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

#ifndef ACTIONABLE_EMBEDDING_CLIENT_H_
#define ACTIONABLE_EMBEDDING_CLIENT_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace actionable {

using EmbeddingVector = std::vector<double>;

enum class BackendKind { kStub, kRemote };

std::optional<BackendKind> ParseBackendKind(std::string_view name);

struct BackendConfig {
  BackendKind kind = BackendKind::kStub;
  size_t dim = 512;       // stub only
  uint64_t seed = 1;      // stub hashing seed
  std::string endpoint;   // remote only, e.g. "http://127.0.0.1:8080"
  size_t batch_size = 64;
  std::optional<std::filesystem::path> cache_path;

  size_t max_in_flight = 4;
  int attempts = 3;
  std::chrono::milliseconds backoff{200};  // doubled after each failure
  std::chrono::seconds timeout{30};

  void Validate() const;

  // Identifies the vector space; part of every cache key.
  std::string BackendId() const;
};

// Hashed unigram + bigram features with signed +-1 counts, L2-normalised.
// Deterministic in (sentence, dim, seed); empty input gives a zero vector.
EmbeddingVector StubEmbed(std::string_view sentence, size_t dim, uint64_t seed);

// Persistent JSON Lines cache: {"k": <sha256 hex>, "v": [floats]}.
class EmbeddingCache {
 public:
  // In-memory only when `path` is empty; otherwise existing entries are
  // loaded from it.
  explicit EmbeddingCache(std::optional<std::filesystem::path> path = {});

  static std::string Key(std::string_view backend_id, std::string_view sentence);

  std::optional<EmbeddingVector> Lookup(const std::string &key) const;
  void Insert(const std::string &key, EmbeddingVector value);
  // Appends entries inserted since the last flush to the backing file.
  void Flush();
  size_t size() const;

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> entries_;
  std::vector<std::string> pending_;
};

// Client for either backend. Remote calls follow the JSON protocol
//   POST {endpoint}/embed  {"sentences":[...]} -> {"embeddings":[[...]],"dim":N,"model":"..."}
//   GET  {endpoint}/health -> {"status":"ok","dim":N}
// Failures: Error(kBackendUnavailable) after the retry budget,
// Error(kProtocol) for malformed responses or HTTP 4xx,
// Error(kDimensionDrift) when vector widths disagree.
class EmbeddingClient {
 public:
  explicit EmbeddingClient(BackendConfig config);

  // Order-preserving; repeated sentences map to identical vectors.
  std::vector<EmbeddingVector> Embed(std::span<const std::string> sentences);

  // Remote only: returns the dimension reported by /health.
  size_t Health();

  size_t remote_calls() const { return remote_calls_.load(); }
  const BackendConfig &config() const { return config_; }
  std::optional<size_t> dim() const;

 private:
  std::vector<EmbeddingVector> PostEmbed(std::span<const std::string> batch);
  void CheckDim(size_t dim);

  BackendConfig config_;
  std::string backend_id_;
  EmbeddingCache cache_;
  std::atomic<size_t> remote_calls_{0};
  mutable std::mutex dim_mu_;
  std::optional<size_t> dim_;
};

std::vector<EmbeddingVector> EmbedBatch(std::span<const std::string> sentences,
                                        const BackendConfig &backend);

}  // namespace actionable

#endif  // ACTIONABLE_EMBEDDING_CLIENT_H_
