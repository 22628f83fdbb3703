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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "embscope/dataset.hpp"
#include "embscope/matrix_io.hpp"

namespace embscope {

/// Rank-ordered k nearest neighbors of every point of one frame.
///
/// Row `x` lists the ids of N_E(x) by ascending distance (rank 0 = nearest),
/// never containing `x` itself. A per-row copy sorted by id backs the set
/// operations (membership, rank lookup, intersections) used by every
/// comparison metric.
class NeighborTable
{
public:
  NeighborTable() = default;
  NeighborTable(FrameId frame_id, std::uint32_t k, std::uint32_t rows, std::vector<PointId> ids);

  FrameId frame_id() const
  {
    return frame_id_;
  }
  std::uint32_t k() const
  {
    return k_;
  }
  std::uint32_t rows() const
  {
    return rows_;
  }

  /// Row `x` in rank order.
  std::span<PointId const> Row(PointId x) const;

  /// Row `x` sorted by id (the set N_E(x)).
  std::span<PointId const> Set(PointId x) const;

  /// rank_E(y; x), or nullopt when y is not among x's neighbors.
  std::optional<std::uint32_t> Rank(PointId y, PointId x) const;

  bool Contains(PointId x, PointId y) const;

  std::vector<PointId> const &ids() const
  {
    return ids_;
  }

  NeighborIds ToNeighborIds() const;
  static NeighborTable FromNeighborIds(FrameId frame_id, NeighborIds const &n);

private:
  FrameId              frame_id_ = 0;
  std::uint32_t        k_        = 0;
  std::uint32_t        rows_     = 0;
  std::vector<PointId> ids_;
  // Per row: ids sorted ascending, and the rank of each sorted entry.
  std::vector<PointId>       sorted_;
  std::vector<std::uint32_t> sorted_rank_;
};

/// Exact k-NN under the frame's metric. Ties are broken by ascending id. Work
/// is split into row blocks over `threads` workers (0 = hardware concurrency);
/// the output does not depend on the thread count.
NeighborTable ComputeNeighbors(EmbeddingFrame const &frame, std::uint32_t k, unsigned threads = 0);

std::optional<std::uint32_t> NeighborRank(NeighborTable const &table, PointId y, PointId x);

/// N_E(x) as an id-sorted vector.
std::vector<PointId> NeighborSet(NeighborTable const &table, PointId x);

/// Content hash of a frame's vectors (FNV-1a over shape and float bits),
/// used as the neighbor cache key together with k and the metric.
std::uint64_t FrameContentHash(EmbeddingFrame const &frame);

std::filesystem::path NeighborCachePath(std::filesystem::path const &cache_dir,
                                        EmbeddingFrame const &frame, std::uint32_t k);

/// Loads the table from `cache_dir` when a matching entry exists, otherwise
/// computes and stores it. `hit` reports which happened.
NeighborTable LoadOrComputeNeighbors(std::filesystem::path const &cache_dir,
                                     EmbeddingFrame const &frame, std::uint32_t k,
                                     bool *hit = nullptr, unsigned threads = 0);

}  // namespace embscope
