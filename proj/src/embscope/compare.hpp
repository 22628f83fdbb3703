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
#include <span>
#include <vector>

#include "embscope/neighbors.hpp"
#include "embscope/selection.hpp"

namespace embscope {

inline constexpr std::uint32_t kDefaultCommonChanges = 5;
inline constexpr std::uint32_t kDefaultNeighborList  = 10;

/// Size of the intersection of two id-sorted ranges.
std::size_t IntersectionSize(std::span<PointId const> a, std::span<PointId const> b);

/// 1 - |P∩Q|/|P∪Q| over id-sorted, duplicate-free inputs. J(∅,∅) = 0.
double JaccardDistance(std::span<PointId const> p, std::span<PointId const> q);

/// Fraction of x's neighbors that differ between the two frames: 1 - |N_A(x)∩N_B(x)|/k.
double TrailWeight(NeighborTable const &a, NeighborTable const &b, PointId x);
std::vector<double> TrailWeights(NeighborTable const &a, NeighborTable const &b);

/// Inverse-rank mass of y among the selection's B-neighbors that are new
/// relative to A: sum over x in S of (k - rank_B(y;x)) where y ∉ N_A(x), y ∈ N_B(x).
std::uint64_t ChangeScore(PointId y, std::span<PointId const> selection, NeighborTable const &a,
                          NeighborTable const &b);

/// Change(y;A,B) - Change(y;B,A).
std::int64_t ChangeCriterion(PointId y, std::span<PointId const> selection, NeighborTable const &a,
                             NeighborTable const &b);

struct ScoredPoint
{
  PointId      id;
  std::int64_t value;

  bool operator==(ScoredPoint const &) const = default;
};

struct CommonChanges
{
  std::vector<ScoredPoint> added;    // criterion > 0, descending
  std::vector<ScoredPoint> removed;  // criterion < 0, ascending (most removed first)
};

/// Neighbors most consistently gained / lost by the selection from A to B.
/// The pool is the union of the selection's neighbors in both frames, minus
/// the selection itself. Ties go to the lower id; zero criteria are never listed.
CommonChanges ComputeCommonChanges(std::span<PointId const> selection, NeighborTable const &a,
                                   NeighborTable const &b, std::uint32_t top = kDefaultCommonChanges);

struct SelectionNeighbor
{
  PointId       id;
  std::uint64_t score;    // total inverse rank
  std::uint32_t support;  // members of S having id as a neighbor

  bool operator==(SelectionNeighbor const &) const = default;
};

/// Neighbors of a multi-point selection ranked by total inverse rank.
std::vector<SelectionNeighbor> SelectionNeighbors(std::span<PointId const> selection,
                                                  NeighborTable const &table,
                                                  std::uint32_t top = kDefaultNeighborList);

enum class DiffFlag
{
  kCommon,
  kOnlyA,
  kOnlyB,
};

char const *DiffFlagName(DiffFlag flag);

struct DiffEntry
{
  SelectionNeighbor neighbor;
  DiffFlag          flag;
};

struct NeighborDiff
{
  std::vector<DiffEntry> in_a;
  std::vector<DiffEntry> in_b;
};

/// Selection neighbor lists of both frames, each entry flagged by whether it
/// is also a candidate neighbor of the selection in the other frame.
NeighborDiff ComputeNeighborDiff(std::span<PointId const> selection, NeighborTable const &a,
                                 NeighborTable const &b, std::uint32_t top = kDefaultNeighborList);

struct FrameComparison
{
  FrameId             frame_a = 0;
  FrameId             frame_b = 0;
  std::vector<double> trail_weights;
  CommonChanges       common;
  NeighborDiff        diff;
};

/// Trail weights for every point; common changes and neighbor diff for the
/// selection when it is non-empty.
FrameComparison CompareFrames(NeighborTable const &a, NeighborTable const &b,
                              std::span<PointId const> selection,
                              std::uint32_t top_changes   = kDefaultCommonChanges,
                              std::uint32_t top_neighbors = kDefaultNeighborList);

}  // namespace embscope
