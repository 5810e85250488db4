// Copyright (c) 2026 The igprm Authors
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

#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace igprm
{

struct EmbeddingRecord
{
  std::string text;
  std::string model;
  std::vector<float> vector;
};

/// Append-only JSON-lines store: {"text", "model", "dim", "vector"} per line.
/// One writer per file; readers see a consistent prefix because every record
/// is written with a single append.
class EmbeddingCache
{
public:
  explicit EmbeddingCache(std::filesystem::path path);

  std::optional<std::vector<float>> lookup(std::string_view text, std::string_view model) const;
  void append(const EmbeddingRecord & rec);
  std::size_t size() const;

  const std::filesystem::path & path() const {return path_;}

  /// Parses every record; malformed lines raise IoError naming the line.
  static std::vector<EmbeddingRecord> read_all(const std::filesystem::path & path);
  static std::string to_line(const EmbeddingRecord & rec);

private:
  static std::string key(std::string_view text, std::string_view model);

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::vector<float>> entries_;
};

struct EndpointConfig
{
  /// e.g. "https://host/v1/embeddings"
  std::string url;
  std::string model = "text-embedding-ada-002";
  /// Name of the environment variable holding the bearer credential.
  std::string credential_env;
  std::filesystem::path cache_path;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::seconds timeout{30};
};

/// Remote embedding client with a local cache in front of it.
class EmbeddingClient
{
public:
  explicit EmbeddingClient(EndpointConfig cfg);

  /// Cached vector if present, otherwise one POST {"input", "model"}; the
  /// response must carry a 1536-float vector. Throws MissingCredential,
  /// NetworkError (after retries), DimensionMismatch.
  std::vector<float> fetch(std::string_view text);

  /// HTTP requests issued so far, retries included.
  int requests_made() const {return requests_;}

private:
  std::vector<float> request(std::string_view text, const std::string & credential);

  EndpointConfig cfg_;
  EmbeddingCache cache_;
  int requests_ = 0;
};

std::vector<float> fetch_embedding(const EndpointConfig & cfg, std::string_view text);

/// Accepts {"data":[{"embedding":[...]}]}, {"embedding":[...]} or a bare array.
std::vector<float> parse_embedding_response(std::string_view body);

}  // namespace igprm
