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

#include "igprm/embedding_client.hpp"

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "igprm/error.hpp"
#include "igprm/instructions.hpp"

namespace igprm
{

using json = nlohmann::json;

EmbeddingCache::EmbeddingCache(std::filesystem::path path)
: path_(std::move(path))
{
  if (path_.empty() || !std::filesystem::exists(path_)) {
    return;
  }
  for (auto & rec : read_all(path_)) {
    entries_[key(rec.text, rec.model)] = std::move(rec.vector);
  }
}

std::string EmbeddingCache::key(std::string_view text, std::string_view model)
{
  std::string k(model);
  k.push_back('\0');
  k.append(text);
  return k;
}

std::optional<std::vector<float>> EmbeddingCache::lookup(
  std::string_view text, std::string_view model) const
{
  std::lock_guard lock(mu_);
  auto it = entries_.find(key(text, model));
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t EmbeddingCache::size() const
{
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::string EmbeddingCache::to_line(const EmbeddingRecord & rec)
{
  json j;
  j["text"] = rec.text;
  j["model"] = rec.model;
  j["dim"] = rec.vector.size();
  j["vector"] = rec.vector;
  return j.dump() + "\n";
}

void EmbeddingCache::append(const EmbeddingRecord & rec)
{
  std::lock_guard lock(mu_);
  const auto k = key(rec.text, rec.model);
  if (entries_.count(k) != 0) {
    return;
  }
  if (!path_.empty()) {
    const std::string line = to_line(rec);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.flush();
    if (!out) {
      throw Error(Errc::IoError, "cannot append to embedding cache " + path_.string());
    }
  }
  entries_.emplace(k, rec.vector);
}

std::vector<EmbeddingRecord> EmbeddingCache::read_all(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot read embedding cache " + path.string());
  }
  std::vector<EmbeddingRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    try {
      const json j = json::parse(line);
      EmbeddingRecord rec;
      rec.text = j.at("text").get<std::string>();
      rec.model = j.at("model").get<std::string>();
      rec.vector = j.at("vector").get<std::vector<float>>();
      if (j.at("dim").get<std::size_t>() != rec.vector.size()) {
        throw Error(Errc::IoError, "dim field disagrees with vector length");
      }
      out.push_back(std::move(rec));
    } catch (const json::exception & e) {
      throw Error(
        Errc::IoError,
        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<float> parse_embedding_response(std::string_view body)
{
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception & e) {
    throw Error(Errc::NetworkError, std::string("unparseable embedding response: ") + e.what());
  }
  const json * vec = nullptr;
  if (j.is_array()) {
    vec = &j;
  } else if (j.is_object() && j.contains("data") && j["data"].is_array() && !j["data"].empty() &&
    j["data"][0].contains("embedding"))
  {
    vec = &j["data"][0]["embedding"];
  } else if (j.is_object() && j.contains("embedding")) {
    vec = &j["embedding"];
  }
  if (vec == nullptr || !vec->is_array()) {
    throw Error(Errc::NetworkError, "response carries no embedding vector");
  }
  std::vector<float> out;
  out.reserve(vec->size());
  for (const auto & v : *vec) {
    if (!v.is_number()) {
      throw Error(Errc::NetworkError, "embedding contains a non-numeric entry");
    }
    out.push_back(v.get<float>());
  }
  return out;
}

EmbeddingClient::EmbeddingClient(EndpointConfig cfg)
: cfg_(std::move(cfg)), cache_(cfg_.cache_path)
{
}

namespace
{

struct SplitUrl
{
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string & url)
{
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::InvalidArgument, "endpoint URL needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<float> EmbeddingClient::request(std::string_view text, const std::string & credential)
{
  const SplitUrl target = split_url(cfg_.url);
  httplib::Client cli(target.origin);
  cli.set_connection_timeout(cfg_.timeout);
  cli.set_read_timeout(cfg_.timeout);
  const httplib::Headers headers{{"Authorization", "Bearer " + credential}};
  const json body{{"input", std::string(text)}, {"model", cfg_.model}};

  auto backoff = cfg_.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    ++requests_;
    auto res = cli.Post(target.path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(Errc::NetworkError, "endpoint answered HTTP " + std::to_string(res->status));
    }
    return parse_embedding_response(res->body);
  }
  throw Error(
    Errc::NetworkError,
    "embedding request failed after " + std::to_string(cfg_.max_retries) + " retries: " + last_error);
}

std::vector<float> EmbeddingClient::fetch(std::string_view text)
{
  if (auto hit = cache_.lookup(text, cfg_.model)) {
    return *hit;
  }
  const char * cred = cfg_.credential_env.empty() ? nullptr : std::getenv(cfg_.credential_env.c_str());
  if (cred == nullptr || *cred == '\0') {
    throw Error(
      Errc::MissingCredential,
      "environment variable '" + cfg_.credential_env + "' is not set");
  }
  auto vec = request(text, cred);
  if (vec.size() != kEmbeddingDim) {
    throw Error(
      Errc::DimensionMismatch,
      "endpoint returned " + std::to_string(vec.size()) + " values, expected 1536");
  }
  cache_.append({std::string(text), cfg_.model, vec});
  return vec;
}

std::vector<float> fetch_embedding(const EndpointConfig & cfg, std::string_view text)
{
  EmbeddingClient client(cfg);
  return client.fetch(text);
}

}  // namespace igprm
