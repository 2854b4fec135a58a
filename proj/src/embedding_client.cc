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

#include "actionable/embedding_client.h"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <future>
#include <thread>

#include "actionable/error.h"
#include "actionable/text_segment.h"
#include "actionable/util.h"
#include "httplib.h"
#include "json.hpp"

namespace actionable {

using json = nlohmann::ordered_json;

std::optional<BackendKind> ParseBackendKind(std::string_view name) {
  if (name == "stub") return BackendKind::kStub;
  if (name == "remote") return BackendKind::kRemote;
  return std::nullopt;
}

void BackendConfig::Validate() const {
  if (kind == BackendKind::kStub && dim < 8) {
    throw Error(ErrorCode::kInvalidArgument, "stub dim must be >= 8");
  }
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  }
  if (kind == BackendKind::kRemote && endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote backend needs an endpoint");
  }
  if (kind == BackendKind::kRemote && endpoint.rfind("http://", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must start with http://: " + endpoint);
  }
  if (max_in_flight < 1 || attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_in_flight and attempts must be >= 1");
  }
}

std::string BackendConfig::BackendId() const {
  if (kind == BackendKind::kStub) {
    return "stub:dim=" + std::to_string(dim) + ":seed=" + std::to_string(seed);
  }
  return "remote:" + endpoint;
}

EmbeddingVector StubEmbed(std::string_view sentence, size_t dim, uint64_t seed) {
  EmbeddingVector v(dim, 0.0);
  if (dim == 0) return v;
  const std::vector<Token> tokens = Tokenize(sentence);
  auto add = [&](std::string_view feature) {
    const uint64_t h = Fnv1a64(feature, seed);
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    v[(h & 0x7fffffffffffffffULL) % dim] += sign;
  };
  for (size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i].lower);
    if (i + 1 < tokens.size()) {
      add(tokens[i].lower + '\x1f' + tokens[i + 1].lower);
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double &x : v) x /= norm;
  }
  return v;
}

EmbeddingCache::EmbeddingCache(std::optional<std::filesystem::path> path)
    : path_(std::move(path)) {
  if (!path_ || !std::filesystem::exists(*path_)) return;
  const std::string text = ReadFile(*path_);
  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (TrimView(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("k") || !j.contains("v")) {
      throw Error(ErrorCode::kParse, path_->string() + ":" +
                                         std::to_string(lineno) +
                                         ": malformed cache entry");
    }
    entries_[j["k"].get<std::string>()] = j["v"].get<EmbeddingVector>();
  }
}

std::string EmbeddingCache::Key(std::string_view backend_id,
                                std::string_view sentence) {
  std::string material(backend_id);
  material.push_back('\n');
  material.append(sentence);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(material.data(), material.size(), digest, &len, EVP_sha256(),
             nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::optional<EmbeddingVector> EmbeddingCache::Lookup(const std::string &key) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::Insert(const std::string &key, EmbeddingVector value) {
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.emplace(key, std::move(value)).second) pending_.push_back(key);
}

void EmbeddingCache::Flush() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!path_ || pending_.empty()) {
    pending_.clear();
    return;
  }
  if (path_->has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_->parent_path(), ec);
  }
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + path_->string());
  for (const std::string &key : pending_) {
    json j{{"k", key}, {"v", entries_.at(key)}};
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path_->string());
  pending_.clear();
}

size_t EmbeddingCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

namespace {

struct Endpoint {
  std::string scheme_host_port;
  std::string prefix;
};

Endpoint ParseEndpoint(const std::string &url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must start with http://: " + url);
  }
  const size_t slash = url.find('/', scheme.size());
  Endpoint e;
  e.scheme_host_port = url.substr(0, slash);
  if (slash != std::string::npos) {
    e.prefix = url.substr(slash);
    while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  }
  return e;
}

}  // namespace

EmbeddingClient::EmbeddingClient(BackendConfig config)
    : config_(std::move(config)),
      backend_id_(config_.BackendId()),
      cache_(config_.cache_path) {
  config_.Validate();
  if (config_.kind == BackendKind::kStub) dim_ = config_.dim;
}

std::optional<size_t> EmbeddingClient::dim() const {
  std::lock_guard<std::mutex> lock(dim_mu_);
  return dim_;
}

void EmbeddingClient::CheckDim(size_t dim) {
  std::lock_guard<std::mutex> lock(dim_mu_);
  if (!dim_) {
    dim_ = dim;
  } else if (*dim_ != dim) {
    throw Error(ErrorCode::kDimensionDrift,
                "expected dim " + std::to_string(*dim_) + ", got " +
                    std::to_string(dim));
  }
}

std::vector<EmbeddingVector> EmbeddingClient::Embed(
    std::span<const std::string> sentences) {
  std::vector<EmbeddingVector> out(sentences.size());
  // First position of each distinct sentence, and the distinct misses.
  std::unordered_map<std::string_view, size_t> first;
  std::vector<size_t> misses;
  std::vector<std::string> keys(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    auto [it, inserted] = first.emplace(sentences[i], i);
    if (!inserted) continue;
    keys[i] = EmbeddingCache::Key(backend_id_, sentences[i]);
    if (auto hit = cache_.Lookup(keys[i])) {
      CheckDim(hit->size());
      out[i] = std::move(*hit);
    } else {
      misses.push_back(i);
    }
  }

  if (config_.kind == BackendKind::kStub) {
    for (size_t i : misses) {
      out[i] = StubEmbed(sentences[i], config_.dim, config_.seed);
      cache_.Insert(keys[i], out[i]);
    }
  } else {
    std::vector<std::vector<size_t>> chunks;
    for (size_t s = 0; s < misses.size(); s += config_.batch_size) {
      const size_t e = std::min(misses.size(), s + config_.batch_size);
      chunks.emplace_back(misses.begin() + s, misses.begin() + e);
    }
    for (size_t wave = 0; wave < chunks.size(); wave += config_.max_in_flight) {
      const size_t stop = std::min(chunks.size(), wave + config_.max_in_flight);
      std::vector<std::future<std::vector<EmbeddingVector>>> inflight;
      for (size_t c = wave; c < stop; ++c) {
        std::vector<std::string> batch;
        for (size_t i : chunks[c]) batch.push_back(sentences[i]);
        inflight.push_back(std::async(
            std::launch::async,
            [this, b = std::move(batch)] { return PostEmbed(b); }));
      }
      // Collect every future before rethrowing so no request outlives us.
      std::exception_ptr failure;
      for (size_t c = wave; c < stop; ++c) {
        try {
          std::vector<EmbeddingVector> vecs = inflight[c - wave].get();
          for (size_t k = 0; k < chunks[c].size(); ++k) {
            const size_t i = chunks[c][k];
            out[i] = std::move(vecs[k]);
            cache_.Insert(keys[i], out[i]);
          }
        } catch (...) {
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) {
        cache_.Flush();
        std::rethrow_exception(failure);
      }
    }
  }
  cache_.Flush();

  for (size_t i = 0; i < sentences.size(); ++i) {
    const size_t f = first.at(sentences[i]);
    if (f != i) out[i] = out[f];
  }
  return out;
}

std::vector<EmbeddingVector> EmbeddingClient::PostEmbed(
    std::span<const std::string> batch) {
  const Endpoint ep = ParseEndpoint(config_.endpoint);
  const std::string body =
      json{{"sentences", std::vector<std::string>(batch.begin(), batch.end())}}
          .dump(-1, ' ', false, json::error_handler_t::replace);
  std::string last_error = "no attempt made";
  auto backoff = config_.backoff;
  for (int attempt = 0; attempt < config_.attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(ep.scheme_host_port);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    ++remote_calls_;
    auto res = client.Post(ep.prefix + "/embed", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kProtocol,
                  "/embed returned HTTP " + std::to_string(res->status));
    }

    json j = json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("embeddings") ||
        !j["embeddings"].is_array() || !j.contains("dim") ||
        !j["dim"].is_number_unsigned()) {
      throw Error(ErrorCode::kProtocol, "malformed /embed response");
    }
    const auto dim = j["dim"].get<size_t>();
    const json &rows = j["embeddings"];
    if (rows.size() != batch.size()) {
      throw Error(ErrorCode::kProtocol,
                  "/embed returned " + std::to_string(rows.size()) +
                      " vectors for " + std::to_string(batch.size()) +
                      " sentences");
    }
    std::vector<EmbeddingVector> vecs;
    vecs.reserve(rows.size());
    for (const json &row : rows) {
      if (!row.is_array()) {
        throw Error(ErrorCode::kProtocol, "embedding is not an array");
      }
      if (row.size() != dim) {
        throw Error(ErrorCode::kDimensionDrift,
                    "vector of width " + std::to_string(row.size()) +
                        " in a response declaring dim " + std::to_string(dim));
      }
      EmbeddingVector v;
      v.reserve(dim);
      for (const json &x : row) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) {
          throw Error(ErrorCode::kProtocol, "non-numeric embedding value");
        }
        v.push_back(x.get<double>());
      }
      vecs.push_back(std::move(v));
    }
    CheckDim(dim);
    return vecs;
  }
  throw Error(ErrorCode::kBackendUnavailable,
              config_.endpoint + ": " + last_error + " after " +
                  std::to_string(config_.attempts) + " attempts");
}

size_t EmbeddingClient::Health() {
  if (config_.kind == BackendKind::kStub) return config_.dim;
  const Endpoint ep = ParseEndpoint(config_.endpoint);
  httplib::Client client(ep.scheme_host_port);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  auto res = client.Get(ep.prefix + "/health");
  if (!res) {
    throw Error(ErrorCode::kBackendUnavailable,
                config_.endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendUnavailable,
                "/health returned HTTP " + std::to_string(res->status));
  }
  json j = json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("status", "") != "ok" ||
      !j.contains("dim") || !j["dim"].is_number_unsigned()) {
    throw Error(ErrorCode::kProtocol, "malformed /health response");
  }
  const auto dim = j["dim"].get<size_t>();
  CheckDim(dim);
  return dim;
}

std::vector<EmbeddingVector> EmbedBatch(std::span<const std::string> sentences,
                                        const BackendConfig &backend) {
  EmbeddingClient client(backend);
  return client.Embed(sentences);
}

}  // namespace actionable
