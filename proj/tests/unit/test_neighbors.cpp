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

#include "embscope/matrix_io.hpp"
#include "embscope/neighbors.hpp"
#include "support/fixtures.hpp"

using namespace embscope;
using namespace embscope::testing;

namespace {

std::vector<std::vector<PointId>> TableRows(NeighborTable const &t)
{
  std::vector<std::vector<PointId>> rows;
  for (PointId x = 0; x < t.rows(); ++x)
  {
    auto r = t.Row(x);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

}  // namespace

TEST_CASE("collinear points")
{
  Matrix m(3, 1);
  m.At(0, 0) = 0;
  m.At(1, 0) = 1;
  m.At(2, 0) = 3;
  auto const t = ComputeNeighbors(MakeFrame(0, m, Metric::kEuclidean), 2);
  CHECK(TableRows(t) == std::vector<std::vector<PointId>>{{1, 2}, {0, 2}, {1, 0}});
}

TEST_CASE("k = N-1 rows are permutations")
{
  Rng        rng(2);
  auto const f = MakeFrame(0, GaussianMatrix(40, 5, rng), Metric::kCosine);
  auto const t = ComputeNeighbors(f, 39);
  for (PointId x = 0; x < 40; ++x)
  {
    auto s = RowSet(t, x);
    CHECK(s.size() == 39);
    CHECK(s.count(x) == 0);
  }
}

TEST_CASE("duplicate points tie-break by id")
{
  // Points 1, 2 and 4 coincide; 0 and 3 are elsewhere.
  Matrix m(5, 2);
  float const coords[5][2] = {{5, 5}, {1, 1}, {1, 1}, {-4, 0}, {1, 1}};
  for (int i = 0; i < 5; ++i)
  {
    m.At(i, 0) = coords[i][0];
    m.At(i, 1) = coords[i][1];
  }
  auto const t = ComputeNeighbors(MakeFrame(0, m, Metric::kEuclidean), 2);
  CHECK(TableRows(t)[1] == std::vector<PointId>{2, 4});
  CHECK(TableRows(t)[2] == std::vector<PointId>{1, 4});
  CHECK(TableRows(t)[4] == std::vector<PointId>{1, 2});
  CHECK(TableRows(t) == BruteForceKnn(MakeFrame(0, m, Metric::kEuclidean), 2));
}

TEST_CASE("rank lookups")
{
  auto const t = TableFromRows(0, {{1, 2, 3}, {2, 3, 0}, {0, 1, 3}, {2, 1, 0}});
  CHECK(t.Rank(1, 0) == 0u);
  CHECK(t.Rank(3, 0) == 2u);
  CHECK_FALSE(t.Rank(0, 0).has_value());
  CHECK(NeighborRank(t, 1, 3) == 1u);
  CHECK(t.Contains(2, 0));
  CHECK_FALSE(t.Contains(2, 2));
  CHECK(NeighborSet(t, 3) == std::vector<PointId>{0, 1, 2});
  for (PointId x = 0; x < 4; ++x)
  {
    for (PointId y = 0; y < 4; ++y)
    {
      int const r = RankScan(t, y, x);
      CHECK(t.Rank(y, x) == (r < 0 ? std::optional<std::uint32_t>{} : std::optional<std::uint32_t>(r)));
    }
  }
}

TEST_CASE("table construction validates rows")
{
  CHECK_THROWS_AS(TableFromRows(0, {{0, 1}, {0, 2}, {0, 1}}), Error);  // self
  CHECK_THROWS_AS(TableFromRows(0, {{1, 1}, {0, 2}, {0, 1}}), Error);  // duplicate
  CHECK_THROWS_AS(TableFromRows(0, {{1, 5}, {0, 2}, {0, 1}}), Error);  // out of range
}

TEST_CASE("k out of range")
{
  Rng        rng(3);
  auto const f = MakeFrame(0, GaussianMatrix(10, 3, rng));
  CHECK_THROWS_AS(ComputeNeighbors(f, 0), Error);
  CHECK_THROWS_AS(ComputeNeighbors(f, 10), Error);
}

TEST_CASE("oracle equivalence")
{
  Rng rng(4);
  for (std::uint32_t n : {2u, 7u, 33u, 300u, 1000u})
  {
    for (Metric metric : {Metric::kCosine, Metric::kEuclidean})
    {
      auto const          f = MakeFrame(0, GaussianMatrix(n, 1 + n % 19, rng), metric);
      std::uint32_t const k = std::min<std::uint32_t>(n - 1, 17);
      INFO("n=" << n << " metric=" << MetricName(metric));
      CHECK(TableRows(ComputeNeighbors(f, k, 3)) == BruteForceKnn(f, k));
    }
  }
}

TEST_CASE("oracle equivalence with many ties")
{
  // Integer lattice coordinates produce many equal distances.
  Rng                                 rng(5);
  std::uniform_int_distribution<int>  coord(0, 3);
  Matrix                              m(200, 3);
  for (auto &v : m.values)
  {
    v = static_cast<float>(coord(rng));
  }
  auto const f = MakeFrame(0, m, Metric::kEuclidean);
  CHECK(TableRows(ComputeNeighbors(f, 30)) == BruteForceKnn(f, 30));
}

TEST_CASE("determinism across thread counts")
{
  Rng        rng(6);
  auto const f  = MakeFrame(0, GaussianMatrix(700, 12, rng), Metric::kCosine);
  auto const t1 = ComputeNeighbors(f, 20, 1);
  auto const t2 = ComputeNeighbors(f, 20, 8);
  CHECK(EncodeNeighborIds(t1.ToNeighborIds()) == EncodeNeighborIds(t2.ToNeighborIds()));
}

TEST_CASE("rank-0 neighbor is closest")
{
  Rng        rng(7);
  auto const f = MakeFrame(0, GaussianMatrix(200, 8, rng), Metric::kEuclidean);
  auto const t = ComputeNeighbors(f, 5);
  for (PointId x = 0; x < 200; x += 13)
  {
    double const best = EuclideanDistance(f.vectors.Row(x), f.vectors.Row(t.Row(x)[0]));
    for (PointId z = 0; z < 200; ++z)
    {
      if (z != x)
      {
        CHECK(best <= EuclideanDistance(f.vectors.Row(x), f.vectors.Row(z)));
      }
    }
  }
}

TEST_CASE("cache load and key")
{
  Rng     rng(8);
  TempDir dir("cache");
  auto    f   = MakeFrame(0, GaussianMatrix(60, 4, rng), Metric::kEuclidean);
  bool    hit = true;
  auto    t1  = LoadOrComputeNeighbors(dir.path(), f, 5, &hit);
  CHECK_FALSE(hit);
  CHECK(std::filesystem::exists(NeighborCachePath(dir.path(), f, 5)));
  auto t2 = LoadOrComputeNeighbors(dir.path(), f, 5, &hit);
  CHECK(hit);
  CHECK(t1.ids() == t2.ids());

  // A different k, metric or content is a different key.
  CHECK(NeighborCachePath(dir.path(), f, 6) != NeighborCachePath(dir.path(), f, 5));
  auto g   = f;
  g.metric = Metric::kCosine;
  CHECK(NeighborCachePath(dir.path(), g, 5) != NeighborCachePath(dir.path(), f, 5));
  auto h             = f;
  h.vectors.At(0, 0) += 1.0f;
  CHECK(FrameContentHash(h) != FrameContentHash(f));
  LoadOrComputeNeighbors(dir.path(), h, 5, &hit);
  CHECK_FALSE(hit);
}

TEST_CASE("neighbor ids round trip")
{
  Rng        rng(9);
  auto const rows = RandomRows(30, 6, rng);
  auto const t    = TableFromRows(2, rows);
  auto const back = NeighborTable::FromNeighborIds(2, DecodeNeighborIds(EncodeNeighborIds(t.ToNeighborIds())));
  CHECK(back.ids() == t.ids());
  CHECK(back.frame_id() == 2);
}
