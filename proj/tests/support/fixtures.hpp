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

#pragma once

// Shared generators and brute-force oracles for the unit and acceptance
// suites. Oracles deliberately avoid the library's fast paths: they use
// std::set arithmetic, linear rank scans and full sorts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "embscope/dataset.hpp"
#include "embscope/neighbors.hpp"

namespace embscope::testing {

using Rng = std::mt19937_64;
using IdSet = std::set<PointId>;

inline Matrix GaussianMatrix(std::uint32_t rows, std::uint32_t cols, Rng &rng, double sigma = 1.0)
{
  std::normal_distribution<float> dist(0.0f, static_cast<float>(sigma));
  Matrix                          m(rows, cols);
  for (auto &v : m.values)
  {
    v = dist(rng);
  }
  return m;
}

inline EmbeddingFrame MakeFrame(FrameId id, Matrix vectors, Metric metric = Metric::kEuclidean)
{
  EmbeddingFrame f;
  f.frame_id = id;
  f.name     = "frame" + std::to_string(id);
  f.vectors  = std::move(vectors);
  f.metric   = metric;
  return f;
}

inline std::vector<PointRecord> MakePoints(std::uint32_t n)
{
  std::vector<PointRecord> points(n);
  for (std::uint32_t i = 0; i < n; ++i)
  {
    points[i].id    = i;
    points[i].label = "p" + std::to_string(i);
  }
  return points;
}

/// Table from explicit rank-ordered rows.
inline NeighborTable TableFromRows(FrameId frame, std::vector<std::vector<PointId>> const &rows)
{
  std::uint32_t const  k = static_cast<std::uint32_t>(rows.front().size());
  std::vector<PointId> ids;
  for (auto const &row : rows)
  {
    ids.insert(ids.end(), row.begin(), row.end());
  }
  return {frame, k, static_cast<std::uint32_t>(rows.size()), ids};
}

/// Random rank-ordered rows: k distinct ids per row, never the row itself.
inline std::vector<std::vector<PointId>> RandomRows(std::uint32_t n, std::uint32_t k, Rng &rng)
{
  std::vector<std::vector<PointId>> rows(n);
  std::vector<PointId>              pool(n);
  for (std::uint32_t x = 0; x < n; ++x)
  {
    pool.resize(n);
    std::iota(pool.begin(), pool.end(), 0u);
    pool.erase(pool.begin() + x);
    std::shuffle(pool.begin(), pool.end(), rng);
    rows[x].assign(pool.begin(), pool.begin() + k);
  }
  return rows;
}

/// Perturbs rows: each row keeps a random prefix-subset and refills the rest
/// with fresh ids, giving a second frame correlated with the first.
inline std::vector<std::vector<PointId>> PerturbRows(std::vector<std::vector<PointId>> rows, double replace, Rng &rng)
{
  std::uint32_t const                   n = static_cast<std::uint32_t>(rows.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<PointId> pick(0, n - 1);
  for (std::uint32_t x = 0; x < n; ++x)
  {
    auto &row = rows[x];
    for (auto &id : row)
    {
      if (u(rng) < replace)
      {
        for (;;)
        {
          PointId const c = pick(rng);
          if (c != x && (c == id || std::find(row.begin(), row.end(), c) == row.end()))
          {
            id = c;
            break;
          }
        }
      }
    }
    std::shuffle(row.begin(), row.end(), rng);
  }
  return rows;
}

// ----------------------------------------------------------------------------
// Oracles

/// O(N^2 log N): every distance via PairwiseDistance, full sort by (distance, id).
inline std::vector<std::vector<PointId>> BruteForceKnn(EmbeddingFrame const &f, std::uint32_t k)
{
  std::uint32_t const               n = f.vectors.rows;
  std::vector<std::vector<PointId>> out(n);
  for (std::uint32_t i = 0; i < n; ++i)
  {
    std::vector<std::pair<double, PointId>> all;
    for (std::uint32_t j = 0; j < n; ++j)
    {
      if (j != i)
      {
        all.emplace_back(PairwiseDistance(f.metric, f.vectors.Row(i), f.vectors.Row(j)), j);
      }
    }
    std::sort(all.begin(), all.end());
    for (std::uint32_t r = 0; r < k; ++r)
    {
      out[i].push_back(all[r].second);
    }
  }
  return out;
}

inline IdSet RowSet(NeighborTable const &t, PointId x)
{
  auto const row = t.Row(x);
  return {row.begin(), row.end()};
}

/// Linear scan of the rank-ordered row.
inline int RankScan(NeighborTable const &t, PointId y, PointId x)
{
  auto const row = t.Row(x);
  for (std::size_t r = 0; r < row.size(); ++r)
  {
    if (row[r] == y)
    {
      return static_cast<int>(r);
    }
  }
  return -1;
}

inline double JaccardOracle(IdSet const &p, IdSet const &q)
{
  IdSet uni = p;
  uni.insert(q.begin(), q.end());
  if (uni.empty())
  {
    return 0.0;
  }
  std::size_t inter = 0;
  for (auto v : p)
  {
    inter += q.count(v);
  }
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni.size());
}

inline std::int64_t ChangeOracle(PointId y, std::vector<PointId> const &s, NeighborTable const &a,
                                 NeighborTable const &b)
{
  std::int64_t total = 0;
  for (PointId x : s)
  {
    int const ra = RankScan(a, y, x);
    int const rb = RankScan(b, y, x);
    if (ra < 0 && rb >= 0)
    {
      total += static_cast<std::int64_t>(b.k()) - rb;
    }
  }
  return total;
}

struct OracleChanges
{
  std::vector<std::pair<PointId, std::int64_t>> added;
  std::vector<std::pair<PointId, std::int64_t>> removed;
};

/// Scores every candidate in the pool with the criterion and sorts in full.
inline OracleChanges CommonChangesOracle(std::vector<PointId> const &s, NeighborTable const &a,
                                         NeighborTable const &b, std::size_t top)
{
  IdSet pool;
  for (PointId x : s)
  {
    auto ra = RowSet(a, x);
    auto rb = RowSet(b, x);
    pool.insert(ra.begin(), ra.end());
    pool.insert(rb.begin(), rb.end());
  }
  for (PointId x : s)
  {
    pool.erase(x);
  }
  std::vector<std::pair<PointId, std::int64_t>> scored;
  for (PointId y : pool)
  {
    scored.emplace_back(y, ChangeOracle(y, s, a, b) - ChangeOracle(y, s, b, a));
  }
  OracleChanges out;
  for (auto const &e : scored)
  {
    if (e.second > 0)
    {
      out.added.push_back(e);
    }
    if (e.second < 0)
    {
      out.removed.push_back(e);
    }
  }
  std::sort(out.added.begin(), out.added.end(), [](auto const &l, auto const &r) {
    return l.second != r.second ? l.second > r.second : l.first < r.first;
  });
  std::sort(out.removed.begin(), out.removed.end(), [](auto const &l, auto const &r) {
    return l.second != r.second ? l.second < r.second : l.first < r.first;
  });
  if (out.added.size() > top)
  {
    out.added.resize(top);
  }
  if (out.removed.size() > top)
  {
    out.removed.resize(top);
  }
  return out;
}

/// (id, total inverse rank, support), sorted by score desc then id.
inline std::vector<std::tuple<PointId, std::uint64_t, std::uint32_t>>
SelectionNeighborsOracle(std::vector<PointId> const &s, NeighborTable const &t, std::size_t top)
{
  IdSet const members(s.begin(), s.end());
  IdSet       pool;
  for (PointId x : s)
  {
    auto r = RowSet(t, x);
    pool.insert(r.begin(), r.end());
  }
  std::vector<std::tuple<PointId, std::uint64_t, std::uint32_t>> out;
  for (PointId y : pool)
  {
    if (members.count(y))
    {
      continue;
    }
    std::uint64_t score   = 0;
    std::uint32_t support = 0;
    for (PointId x : s)
    {
      int const r = RankScan(t, y, x);
      if (r >= 0)
      {
        score += t.k() - static_cast<std::uint32_t>(r);
        ++support;
      }
    }
    out.emplace_back(y, score, support);
  }
  std::sort(out.begin(), out.end(), [](auto const &l, auto const &r) {
    return std::get<1>(l) != std::get<1>(r) ? std::get<1>(l) > std::get<1>(r) : std::get<0>(l) < std::get<0>(r);
  });
  if (out.size() > top)
  {
    out.resize(top);
  }
  return out;
}

inline IdSet Minus(IdSet const &p, IdSet const &q)
{
  IdSet out;
  std::set_difference(p.begin(), p.end(), q.begin(), q.end(), std::inserter(out, out.end()));
  return out;
}

inline double PointChangeOracle(PointId x, PointId y, NeighborTable const &a, NeighborTable const &b)
{
  auto const ax = RowSet(a, x);
  auto const bx = RowSet(b, x);
  auto const ay = RowSet(a, y);
  auto const by = RowSet(b, y);
  return 0.5 * (JaccardOracle(Minus(bx, ax), Minus(by, ay)) + JaccardOracle(Minus(ax, bx), Minus(ay, by)));
}

/// d(A,A;S) in closed form: (1/2|S|) Σ [1/(1+|N_A(x)∩S|) + 1/(1+|N_A(x)\S|)].
inline double SelfDistanceClosedForm(NeighborTable const &a, std::vector<PointId> const &s)
{
  IdSet const members(s.begin(), s.end());
  double      total = 0.0;
  for (PointId x : s)
  {
    std::size_t inside = 0;
    for (PointId y : a.Row(x))
    {
      inside += members.count(y);
    }
    total += 1.0 / (1.0 + static_cast<double>(inside)) + 1.0 / (1.0 + static_cast<double>(a.k() - inside));
  }
  return total / (2.0 * static_cast<double>(s.size()));
}

/// Straight evaluation of the frame distance with std::set intersections.
inline double FrameDistanceOracle(NeighborTable const &a, NeighborTable const &b, std::vector<PointId> const &s)
{
  IdSet const members(s.begin(), s.end());
  double      total = 0.0;
  for (PointId x : s)
  {
    auto const  ax = RowSet(a, x);
    auto const  bx = RowSet(b, x);
    std::size_t inner = 0;
    std::size_t outer = 0;
    for (PointId y : ax)
    {
      if (bx.count(y))
      {
        (members.count(y) ? inner : outer) += 1;
      }
    }
    total += 1.0 / (1.0 + static_cast<double>(inner)) + 1.0 / (1.0 + static_cast<double>(outer));
  }
  return total / (2.0 * static_cast<double>(s.size()));
}

/// Cyclic Jacobi eigenvalue iteration for a small symmetric matrix (row-major).
/// Returns eigenvalues in descending order.
inline std::vector<double> JacobiEigenvalues(std::vector<double> a, std::size_t n)
{
  auto at = [&](std::size_t i, std::size_t j) -> double & { return a[i * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep)
  {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t j = i + 1; j < n; ++j)
      {
        off += at(i, j) * at(i, j);
      }
    }
    if (off < 1e-30)
    {
      break;
    }
    for (std::size_t p = 0; p < n; ++p)
    {
      for (std::size_t q = p + 1; q < n; ++q)
      {
        if (std::abs(at(p, q)) < 1e-300)
        {
          continue;
        }
        double const theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        double const t     = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double const c     = 1.0 / std::sqrt(t * t + 1.0);
        double const s     = t * c;
        for (std::size_t k = 0; k < n; ++k)
        {
          double const akp = at(k, p);
          double const akq = at(k, q);
          at(k, p)         = c * akp - s * akq;
          at(k, q)         = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k)
        {
          double const apk = at(p, k);
          double const aqk = at(q, k);
          at(p, k)         = c * apk - s * aqk;
          at(q, k)         = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    values[i] = at(i, i);
  }
  std::sort(values.rbegin(), values.rend());
  return values;
}

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir
{
public:
  explicit TempDir(std::string const &tag)
  {
    static std::uint64_t counter = 0;
    std::random_device   rd;
    path_ = std::filesystem::temp_directory_path() /
            ("embscope_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(TempDir const &)            = delete;
  TempDir &operator=(TempDir const &) = delete;

  std::filesystem::path const &path() const
  {
    return path_;
  }

private:
  std::filesystem::path path_;
};

/// Clustered dataset with a planted group that relocates between frames.
///
/// Frame 0 draws `clusters` Gaussian blobs (unit noise). The first
/// `group_size` members of blob 0 instead form a tight sub-cluster (noise
/// 0.25) around a point inside blob 0. Frame 1 is identical except that the
/// sub-cluster moves, offsets intact, to a fresh region. Returns the planted
/// ids in `planted`.
inline Dataset MakePlantedDataset(std::uint32_t n, std::uint32_t dims, std::uint32_t clusters,
                                  std::uint32_t group_size, std::uint32_t k, Rng &rng,
                                  std::vector<PointId> &planted)
{
  std::normal_distribution<float> center_dist(0.0f, 10.0f);
  std::normal_distribution<float> noise(0.0f, 1.0f);
  auto draw = [&](std::normal_distribution<float> &dist) {
    std::vector<float> v(dims);
    for (auto &x : v)
    {
      x = dist(rng);
    }
    return v;
  };
  std::vector<std::vector<float>> centers;
  for (std::uint32_t c = 0; c < clusters; ++c)
  {
    centers.push_back(draw(center_dist));
  }
  auto const offset = draw(noise);
  auto const target = draw(center_dist);

  Matrix a(n, dims);
  Matrix b(n, dims);
  planted.clear();
  for (std::uint32_t i = 0; i < n; ++i)
  {
    auto const blob  = i % clusters;
    bool const moves = blob == 0 && planted.size() < group_size;
    if (moves)
    {
      planted.push_back(i);
    }
    for (std::uint32_t j = 0; j < dims; ++j)
    {
      float const jitter = noise(rng);
      if (moves)
      {
        a.At(i, j) = centers[0][j] + offset[j] + 0.25f * jitter;
        b.At(i, j) = target[j] + 0.25f * jitter;
      }
      else
      {
        a.At(i, j) = centers[blob][j] + jitter;
        b.At(i, j) = a.At(i, j);
      }
    }
  }

  Dataset d;
  d.name   = "planted";
  d.points = MakePoints(n);
  d.k      = k;
  d.frames.push_back(MakeFrame(0, std::move(a), Metric::kEuclidean));
  d.frames.push_back(MakeFrame(1, std::move(b), Metric::kEuclidean));
  return d;
}

}  // namespace embscope::testing
