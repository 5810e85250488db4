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

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <thread>
#include <vector>

#include "igprm/embedding_client.hpp"
#include "igprm/error.hpp"
#include "igprm/instructions.hpp"
#include "test_util.hpp"

using namespace igprm;
using nlohmann::json;

namespace
{

/// Local stand-in for a remote embedding service.
class FakeEndpoint
{
public:
  FakeEndpoint()
  {
    auto vector_for = [](const std::string & body, std::size_t dim) {
        const auto text = json::parse(body).at("input").get<std::string>();
        auto v = pseudo_embed(text);
        v.resize(dim, 0.0f);
        return json{{"data", json::array({json{{"embedding", v}, {"index", 0}}})}, {"model", "fake"}};
      };
    server_.Post("/v1/embeddings", [&, vector_for](const httplib::Request & req, httplib::Response & res) {
        ++hits;
        if (req.get_header_value("Authorization") != "Bearer sekrit") {
          res.status = 401;
          return;
        }
        res.set_content(vector_for(req.body, kEmbeddingDim).dump(), "application/json");
      });
    server_.Post("/short", [&, vector_for](const httplib::Request & req, httplib::Response & res) {
        ++hits;
        res.set_content(vector_for(req.body, 512).dump(), "application/json");
      });
    server_.Post("/flaky", [&, vector_for](const httplib::Request & req, httplib::Response & res) {
        if (++hits <= 2) {
          res.status = 503;
          return;
        }
        res.set_content(vector_for(req.body, kEmbeddingDim).dump(), "application/json");
      });
    server_.Post("/down", [&](const httplib::Request &, httplib::Response & res) {
        ++hits;
        res.status = 500;
      });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] {server_.listen_after_bind();});
    server_.wait_until_ready();
  }
  ~FakeEndpoint()
  {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string & path) const
  {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::atomic<int> hits{0};

private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

EndpointConfig config(const FakeEndpoint & ep, const std::string & path, const std::filesystem::path & cache)
{
  EndpointConfig cfg;
  cfg.url = ep.url(path);
  cfg.credential_env = "IGPRM_TEST_EMBED_KEY";
  cfg.cache_path = cache;
  cfg.initial_backoff = std::chrono::milliseconds(1);
  cfg.timeout = std::chrono::seconds(5);
  return cfg;
}

Errc code_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.code();
  }
  FAIL("expected an igprm::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("fetch hits the endpoint once, then serves from the cache") {
  test::TempDir dir;
  FakeEndpoint ep;
  setenv("IGPRM_TEST_EMBED_KEY", "sekrit", 1);
  const auto cfg = config(ep, "/v1/embeddings", dir / "cache.jsonl");
  EmbeddingClient client(cfg);
  const auto v = client.fetch("take the wide passage");
  CHECK(v.size() == kEmbeddingDim);
  CHECK(v == pseudo_embed("take the wide passage"));
  CHECK(ep.hits == 1);
  CHECK(client.fetch("take the wide passage") == v);
  CHECK(ep.hits == 1);

  // a fresh client reads the cache file; an unset credential does not matter on a hit
  unsetenv("IGPRM_TEST_EMBED_KEY");
  CHECK(fetch_embedding(cfg, "take the wide passage") == v);
  CHECK(ep.hits == 1);

  const auto records = EmbeddingCache::read_all(dir / "cache.jsonl");
  REQUIRE(records.size() == 1);
  CHECK(records[0].text == "take the wide passage");
  CHECK(records[0].model == cfg.model);
  std::ifstream in(dir / "cache.jsonl");
  std::string line;
  std::getline(in, line);
  const auto j = json::parse(line);
  CHECK(j.at("dim").get<int>() == 1536);
  CHECK(j.at("vector").size() == 1536);
}

TEST_CASE("missing credential fails before any request") {
  test::TempDir dir;
  FakeEndpoint ep;
  unsetenv("IGPRM_TEST_EMBED_KEY");
  const auto cfg = config(ep, "/v1/embeddings", dir / "cache.jsonl");
  CHECK(code_of([&] {fetch_embedding(cfg, "hello");}) == Errc::MissingCredential);
  CHECK(ep.hits == 0);
}

TEST_CASE("wrong dimension is rejected and not cached") {
  test::TempDir dir;
  FakeEndpoint ep;
  setenv("IGPRM_TEST_EMBED_KEY", "sekrit", 1);
  const auto cfg = config(ep, "/short", dir / "cache.jsonl");
  CHECK(code_of([&] {fetch_embedding(cfg, "hello");}) == Errc::DimensionMismatch);
  const auto cache = dir / "cache.jsonl";
  CHECK((!std::filesystem::exists(cache) || EmbeddingCache::read_all(cache).empty()));
}

TEST_CASE("transient server errors are retried") {
  test::TempDir dir;
  FakeEndpoint ep;
  setenv("IGPRM_TEST_EMBED_KEY", "sekrit", 1);
  EmbeddingClient client(config(ep, "/flaky", dir / "cache.jsonl"));
  CHECK(client.fetch("hello there").size() == kEmbeddingDim);
  CHECK(ep.hits == 3);
  CHECK(client.requests_made() == 3);
}

TEST_CASE("persistent failures give NetworkError after the retry budget") {
  test::TempDir dir;
  FakeEndpoint ep;
  setenv("IGPRM_TEST_EMBED_KEY", "sekrit", 1);
  EmbeddingClient client(config(ep, "/down", dir / "cache.jsonl"));
  CHECK(code_of([&] {client.fetch("hello");}) == Errc::NetworkError);
  CHECK(ep.hits == 4);

  setenv("IGPRM_TEST_EMBED_KEY", "wrong", 1);
  EmbeddingClient unauthorised(config(ep, "/v1/embeddings", dir / "cache2.jsonl"));
  CHECK(code_of([&] {unauthorised.fetch("hello");}) == Errc::NetworkError);
  CHECK(is_io_error(Errc::NetworkError));
}

TEST_CASE("response shapes") {
  CHECK(parse_embedding_response(R"({"data":[{"embedding":[1,2,3]}]})").size() == 3);
  CHECK(parse_embedding_response(R"({"embedding":[1,2]})").size() == 2);
  CHECK(parse_embedding_response(R"([0.5])").size() == 1);
  CHECK(code_of([] {parse_embedding_response("not json");}) == Errc::NetworkError);
}

TEST_CASE("concurrent appends keep the cache file intact") {
  test::TempDir dir;
  EmbeddingCache cache(dir / "c.jsonl");
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
        for (int i = 0; i < 25; ++i) {
          const std::string text = "sentence " + std::to_string(t) + " " + std::to_string(i);
          cache.append({text, "m", pseudo_embed(text)});
        }
      });
  }
  for (auto & th : threads) {
    th.join();
  }
  const auto all = EmbeddingCache::read_all(dir / "c.jsonl");
  CHECK(all.size() == 100);
  EmbeddingCache reopened(dir / "c.jsonl");
  CHECK(reopened.size() == 100);
  CHECK(reopened.lookup("sentence 2 7", "m") == pseudo_embed("sentence 2 7"));
  CHECK_FALSE(reopened.lookup("sentence 2 7", "other-model").has_value());
}
