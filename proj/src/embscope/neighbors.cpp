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

#include "embscope/neighbors.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <numeric>
#include <thread>

namespace embscope {

NeighborTable::NeighborTable(FrameId frame_id, std::uint32_t k, std::uint32_t rows,
                             std::vector<PointId> ids)
  : frame_id_(frame_id)
  , k_(k)
  , rows_(rows)
  , ids_(std::move(ids))
  , sorted_(ids_.size())
  , sorted_rank_(ids_.size())
{
  Require(ids_.size() == static_cast<std::size_t>(rows) * k, "neighbor table shape mismatch");
  std::vector<std::uint32_t> order(k);
  for (std::size_t x = 0; x < rows_; ++x)
  {
    auto const row = Row(static_cast<PointId>(x));
    for (auto id : row)
    {
      Require(id < rows_ && id != x, "invalid neighbor id in row " + std::to_string(x));
    }
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return row[a] < row[b]; });
    for (std::size_t i = 0; i < k; ++i)
    {
      sorted_[x * k + i]      = row[order[i]];
      sorted_rank_[x * k + i] = order[i];
      if (i > 0)
      {
        Require(sorted_[x * k + i] != sorted_[x * k + i - 1],
                "duplicate neighbor id in row " + std::to_string(x));
      }
    }
  }
}

std::span<PointId const> NeighborTable::Row(PointId x) const
{
  return {ids_.data() + static_cast<std::size_t>(x) * k_, k_};
}

std::span<PointId const> NeighborTable::Set(PointId x) const
{
  return {sorted_.data() + static_cast<std::size_t>(x) * k_, k_};
}

std::optional<std::uint32_t> NeighborTable::Rank(PointId y, PointId x) const
{
  auto const set = Set(x);
  auto       it  = std::lower_bound(set.begin(), set.end(), y);
  if (it == set.end() || *it != y)
  {
    return std::nullopt;
  }
  return sorted_rank_[static_cast<std::size_t>(x) * k_ + static_cast<std::size_t>(it - set.begin())];
}

bool NeighborTable::Contains(PointId x, PointId y) const
{
  auto const set = Set(x);
  return std::binary_search(set.begin(), set.end(), y);
}

NeighborIds NeighborTable::ToNeighborIds() const
{
  return {rows_, k_, ids_};
}

NeighborTable NeighborTable::FromNeighborIds(FrameId frame_id, NeighborIds const &n)
{
  return {frame_id, n.k, n.rows, n.ids};
}

namespace {

struct Candidate
{
  double  distance;
  PointId id;
};

bool Closer(Candidate const &a, Candidate const &b)
{
  return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

// Bounded max-heap holding the k best candidates seen so far.
class BoundedHeap
{
public:
  explicit BoundedHeap(std::uint32_t k)
    : k_(k)
  {
    items_.reserve(k);
  }

  void Offer(Candidate c)
  {
    if (items_.size() < k_)
    {
      items_.push_back(c);
      std::push_heap(items_.begin(), items_.end(), Closer);
    }
    else if (Closer(c, items_.front()))
    {
      std::pop_heap(items_.begin(), items_.end(), Closer);
      items_.back() = c;
      std::push_heap(items_.begin(), items_.end(), Closer);
    }
  }

  void Drain(std::span<PointId> out)
  {
    std::sort_heap(items_.begin(), items_.end(), Closer);
    for (std::size_t i = 0; i < items_.size(); ++i)
    {
      out[i] = items_[i].id;
    }
    items_.clear();
  }

private:
  std::uint32_t          k_;
  std::vector<Candidate> items_;
};

constexpr std::size_t kRowBlock  = 32;
constexpr std::size_t kTileWidth = 512;

}  // namespace

NeighborTable ComputeNeighbors(EmbeddingFrame const &frame, std::uint32_t k, unsigned threads)
{
  auto const &m = frame.vectors;
  std::size_t const n = m.rows;
  if (k < 1 || k >= n)
  {
    Fail(ErrorKind::kInvalidArgument, "k must satisfy 1 <= k < N");
  }

  bool const          cosine = frame.metric == Metric::kCosine;
  std::vector<double> norms;
  if (cosine)
  {
    norms.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      norms[i] = Norm(m.Row(i));
      if (norms[i] == 0.0)
      {
        Fail(ErrorKind::kInvalidArgument, "zero vector under cosine metric at row " + std::to_string(i));
      }
    }
  }

  std::vector<PointId>     ids(n * k);
  std::size_t const        blocks = (n + kRowBlock - 1) / kRowBlock;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::vector<BoundedHeap> heaps(kRowBlock, BoundedHeap(k));
    for (std::size_t b = next++; b < blocks; b = next++)
    {
      std::size_t const row_begin = b * kRowBlock;
      std::size_t const row_end   = std::min(n, row_begin + kRowBlock);
      // Candidates are visited in ascending id, so ties resolve to the lower id.
      for (std::size_t tile = 0; tile < n; tile += kTileWidth)
      {
        std::size_t const tile_end = std::min(n, tile + kTileWidth);
        for (std::size_t i = row_begin; i < row_end; ++i)
        {
          auto const query = m.Row(i);
          auto      &heap  = heaps[i - row_begin];
          for (std::size_t j = tile; j < tile_end; ++j)
          {
            if (j == i)
            {
              continue;
            }
            double const d = cosine ? CosineDistance(Dot(query, m.Row(j)), norms[i], norms[j])
                                    : EuclideanDistance(query, m.Row(j));
            heap.Offer({d, static_cast<PointId>(j)});
          }
        }
      }
      for (std::size_t i = row_begin; i < row_end; ++i)
      {
        heaps[i - row_begin].Drain({ids.data() + i * k, k});
      }
    }
  };

  unsigned const hw    = std::max(1u, std::thread::hardware_concurrency());
  unsigned const count = static_cast<unsigned>(
      std::min<std::size_t>(threads == 0 ? hw : threads, blocks));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < count; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  return {frame.frame_id, k, static_cast<std::uint32_t>(n), std::move(ids)};
}

std::optional<std::uint32_t> NeighborRank(NeighborTable const &table, PointId y, PointId x)
{
  Require(x < table.rows() && y < table.rows(), "point id out of range");
  return table.Rank(y, x);
}

std::vector<PointId> NeighborSet(NeighborTable const &table, PointId x)
{
  Require(x < table.rows(), "point id out of range");
  auto const set = table.Set(x);
  return {set.begin(), set.end()};
}

std::uint64_t FrameContentHash(EmbeddingFrame const &frame)
{
  std::uint64_t h    = 1469598103934665603ull;
  auto          feed = [&h](std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8)
    {
      h ^= (v >> shift) & 0xFFu;
      h *= 1099511628211ull;
    }
  };
  feed(frame.vectors.rows);
  feed(frame.vectors.cols);
  for (float f : frame.vectors.values)
  {
    feed(std::bit_cast<std::uint32_t>(f));
  }
  return h;
}

std::filesystem::path NeighborCachePath(std::filesystem::path const &cache_dir,
                                        EmbeddingFrame const &frame, std::uint32_t k)
{
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(FrameContentHash(frame)));
  return cache_dir / ("neighbors_" + std::string(hash) + "_k" + std::to_string(k) + "_" +
                      std::string(MetricName(frame.metric)) + ".embn");
}

NeighborTable LoadOrComputeNeighbors(std::filesystem::path const &cache_dir,
                                     EmbeddingFrame const &frame, std::uint32_t k, bool *hit,
                                     unsigned threads)
{
  auto const path = NeighborCachePath(cache_dir, frame, k);
  if (std::filesystem::exists(path))
  {
    auto cached = ReadNeighborIds(path);
    if (cached.rows == frame.vectors.rows && cached.k == k)
    {
      if (hit)
      {
        *hit = true;
      }
      return NeighborTable::FromNeighborIds(frame.frame_id, cached);
    }
  }
  if (hit)
  {
    *hit = false;
  }
  auto table = ComputeNeighbors(frame, k, threads);
  WriteNeighborIds(path, table.ToNeighborIds());
  return table;
}

}  // namespace embscope
