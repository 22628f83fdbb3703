//------------------------------------------------------------------------------
//
//   Copyright 2026 The embscope Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "embscope/engine.hpp"
#include "embscope/service.hpp"
#include "support/fixtures.hpp"

using namespace embscope;
using namespace embscope::testing;
using json = nlohmann::json;

namespace {

constexpr std::uint32_t kPoints = 80;

Dataset SmallDataset(std::uint32_t frames, std::uint64_t seed = 7)
{
  Rng     rng(seed);
  Dataset d;
  d.name   = "small";
  d.points = MakePoints(kPoints);
  d.k      = 8;
  for (std::uint32_t f = 0; f < frames; ++f)
  {
    d.frames.push_back(MakeFrame(f, GaussianMatrix(kPoints, 6, rng), f % 2 ? Metric::kCosine : Metric::kEuclidean));
  }
  return d;
}

std::shared_ptr<Engine const> OpenShared(std::filesystem::path const &dir, PrecomputeOptions const &options = {},
                                         PrecomputeReport *report = nullptr)
{
  return std::make_shared<Engine const>(Engine::Open(dir, options, report));
}

HttpResponse Call(Service &s, std::string const &method, std::string const &target, std::string const &body = {})
{
  return s.Handle(HttpRequest::FromTarget(method, target, body));
}

std::size_t CountFiles(std::filesystem::path const &dir, std::string const &prefix)
{
  std::size_t n = 0;
  for (auto const &e : std::filesystem::directory_iterator(dir))
  {
    n += e.path().filename().string().rfind(prefix, 0) == 0 ? 1 : 0;
  }
  return n;
}

struct Fixture
{
  TempDir dir{"service"};
  Fixture()
  {
    SaveDataset(SmallDataset(2), dir.path());
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "health and dataset summary")
{
  Service s(OpenShared(dir.path()));
  CHECK(Call(s, "GET", "/health").status == 200);
  auto const r = Call(s, "GET", "/dataset");
  REQUIRE(r.status == 200);
  auto const j = json::parse(r.body);
  CHECK(j["N"] == kPoints);
  CHECK(j["F"] == 2);
  CHECK(j["k"] == 8);
  CHECK(Call(s, "GET", "/nope").status == 404);
}

TEST_CASE_FIXTURE(Fixture, "state round trips verbatim and bumps the version")
{
  Service s(OpenShared(dir.path()));
  auto const initial = json::parse(Call(s, "GET", "/state").body);
  for (char const *key : {"current_frame", "comparison_frame", "selection", "viewport", "anchor", "isolate", "filter", "t"})
  {
    CHECK(initial.contains(key));
  }

  std::string const doc =
      R"({"current_frame":0,"comparison_frame":1,"selection":[3,1,2],"viewport":null,"anchor":null,"isolate":false,"filter":null,"t":1})";
  auto const put = Call(s, "PUT", "/state", doc);
  REQUIRE(put.status == 200);
  auto const get = Call(s, "GET", "/state");
  CHECK(get.body == doc);
  CHECK(get.headers.at("X-State-Version") == put.headers.at("X-State-Version"));
  CHECK(Call(s, "PUT", "/state", doc).headers.at("X-State-Version") != put.headers.at("X-State-Version"));
}

TEST_CASE_FIXTURE(Fixture, "invalid state is rejected and leaves state unchanged")
{
  Service    s(OpenShared(dir.path()));
  auto const before = Call(s, "GET", "/state").body;
  CHECK(Call(s, "PUT", "/state", R"({"current_frame":9})").status == 400);
  CHECK(Call(s, "PUT", "/state", R"({"selection":[1000]})").status == 400);
  CHECK(Call(s, "PUT", "/state", R"({"t":2})").status == 400);
  CHECK(Call(s, "PUT", "/state", R"({"mystery":1})").status == 400);
  CHECK(Call(s, "PUT", "/state", "{").status == 400);
  CHECK(Call(s, "GET", "/state").body == before);
}

TEST_CASE_FIXTURE(Fixture, "saved selections: create, conflict, fetch, delete, persist")
{
  {
    Service s(OpenShared(dir.path()));
    CHECK(Call(s, "POST", "/selections", R"({"name":"a","ids":[4,2]})").status == 201);
    CHECK(Call(s, "POST", "/selections", R"({"name":"a","ids":[1]})").status == 409);
    CHECK(Call(s, "POST", "/selections", R"({"name":"b","ids":[5],"notes":"x"})").status == 201);
    CHECK(Call(s, "POST", "/selections", R"({"name":"c","ids":[999]})").status == 400);
    CHECK(Call(s, "GET", "/selections/zzz").status == 404);
    CHECK(Call(s, "DELETE", "/selections/b").status == 200);
    CHECK(Call(s, "DELETE", "/selections/b").status == 404);
  }
  CHECK(std::filesystem::exists(dir.path() / "selections.json"));
  Service    s(OpenShared(dir.path()));
  auto const list = json::parse(Call(s, "GET", "/selections").body)["selections"];
  REQUIRE(list.size() == 1);
  CHECK(list[0]["name"] == "a");
  CHECK(list[0]["ids"] == json::array({4, 2}));
}

TEST_CASE_FIXTURE(Fixture, "compare validates input and self-compare is all zero")
{
  Service s(OpenShared(dir.path()));
  CHECK(Call(s, "POST", "/compare", R"({"frame_a":0,"frame_b":5,"selection":[1]})").status == 400);
  CHECK(Call(s, "POST", "/compare", R"({"frame_a":0,"frame_b":1,"selection":[80]})").status == 400);
  CHECK(Call(s, "POST", "/compare", "not json").status == 400);

  auto const self = json::parse(Call(s, "POST", "/compare", R"({"frame_a":1,"frame_b":1,"selection":[1,2]})").body);
  for (auto const &w : self["trail_weights"])
  {
    CHECK(w.get<double>() == 0.0);
  }
  CHECK(self["common_changes"]["added"].empty());
  CHECK(self["common_changes"]["removed"].empty());

  auto const r = Call(s, "POST", "/compare", R"({"frame_a":0,"frame_b":1,"selection":[1,2,3]})");
  REQUIRE(r.status == 200);
  auto const j = json::parse(r.body);
  CHECK(j["trail_weights"].size() == kPoints);
  CHECK(j["common_changes"]["added"].size() <= 5);
}

TEST_CASE_FIXTURE(Fixture, "compare is byte-deterministic")
{
  Service           s(OpenShared(dir.path()));
  std::string const body = R"({"frame_a":0,"frame_b":1,"selection":[7,9,11]})";
  CHECK(Call(s, "POST", "/compare", body).body == Call(s, "POST", "/compare", body).body);
}

TEST_CASE_FIXTURE(Fixture, "suggestions honor the frame filter and top")
{
  Service    s(OpenShared(dir.path()));
  auto const r = Call(s, "POST", "/suggestions", R"({"current_frame":1,"comparison_frame":0,"top":3})");
  REQUIRE(r.status == 200);
  auto const list = json::parse(r.body)["suggestions"];
  CHECK(list.size() <= 3);
  for (auto const &c : list)
  {
    CHECK(c["frame_a"] == 1);
    CHECK(c["frame_b"] == 0);
    CHECK(c["stripe"]["colors"].size() == 2);
  }
  CHECK(Call(s, "POST", "/suggestions", R"({"current_frame":0,"viewport":{"min":[1,1],"max":[0,0]}})").status == 400);
}

TEST_CASE_FIXTURE(Fixture, "neighbors, stripes, projection and isolate endpoints")
{
  auto const engine = OpenShared(dir.path());
  Service    s(engine);

  auto const n = json::parse(Call(s, "GET", "/neighbors?frame=0&ids=3").body);
  auto const row = engine->table(0).Row(3);
  CHECK(n["rows"][0]["neighbors"] == std::vector<PointId>(row.begin(), row.end()));

  auto const st = json::parse(Call(s, "POST", "/stripes", R"({"selection":[1,2,3]})").body);
  CHECK(st["matrix"].size() == 2);
  CHECK(Call(s, "POST", "/stripes", R"({"selection":[]})").status == 400);

  auto const p = json::parse(Call(s, "GET", "/frames/1/projection?aligned_to=0").body);
  CHECK(p["coordinates"].size() == kPoints);
  auto const same = json::parse(Call(s, "GET", "/frames/0/projection?aligned_to=0").body);
  CHECK(same["transform"] == json::parse(Call(s, "GET", "/frames/0/projection").body)["transform"]);

  auto const iso = json::parse(Call(s, "POST", "/isolate", R"({"selection":[5]})").body);
  CHECK(iso["ids"].size() >= 1);
}

TEST_CASE("precompute reuses caches and recomputes on config change")
{
  TempDir dir("precompute");
  SaveDataset(SmallDataset(3), dir.path());

  PrecomputeReport first;
  auto const       e1 = Engine::Open(dir.path(), {}, &first);
  CHECK(first.neighbor_cache_hit == std::vector<bool>{false, false, false});
  CHECK(first.pool_cache_hit == std::vector<bool>{false, false, false});
  auto const cache = CacheDir(dir.path());
  CHECK(CountFiles(cache, "neighbors_") == 3);
  CHECK(CountFiles(cache, "suggestions_") == 3);

  PrecomputeReport second;
  auto const       e2 = Engine::Open(dir.path(), {}, &second);
  CHECK(second.neighbor_cache_hit == std::vector<bool>{true, true, true});
  CHECK(second.pool_cache_hit == std::vector<bool>{true, true, true});
  CHECK(e1.config_hash() == e2.config_hash());
  CHECK(SerializePairPool(e1.pool().clusters, 0, 1, e1.config_hash()) == SerializePairPool(e2.pool().clusters, 0, 1, e2.config_hash()));

  PrecomputeOptions other;
  other.k = 5;
  PrecomputeReport third;
  auto const       e3 = Engine::Open(dir.path(), other, &third);
  CHECK(third.neighbor_cache_hit == std::vector<bool>{false, false, false});
  CHECK(third.pool_cache_hit == std::vector<bool>{false, false, false});
  CHECK(e3.tables()[0].k() == 5);
  CHECK(e3.config_hash() != e1.config_hash());
}

TEST_CASE("serves health over a real socket")
{
  TempDir dir("socket");
  SaveDataset(SmallDataset(2), dir.path());
  Service s(OpenShared(dir.path()));

  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  REQUIRE(port > 0);
  std::thread server([&] { s.Serve("127.0.0.1", port); });

  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int attempt = 0; attempt < 100 && !res; ++attempt)
  {
    res = client.Get("/health");
    if (!res)
    {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  }
  s.Stop();
  server.join();
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["status"] == "ok");
}
