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

#include "embscope/compare.hpp"

#include <algorithm>
#include <unordered_map>

namespace embscope {
namespace {

void CheckPair(NeighborTable const &a, NeighborTable const &b)
{
  Require(a.rows() == b.rows() && a.k() == b.k(), "neighbor tables are not comparable");
}

void CheckPoint(NeighborTable const &t, PointId x)
{
  if (x >= t.rows())
  {
    Fail(ErrorKind::kInvalidArgument, "point id " + std::to_string(x) + " out of range");
  }
}

}  // namespace

std::size_t IntersectionSize(std::span<PointId const> a, std::span<PointId const> b)
{
  std::size_t count = 0;
  auto        i     = a.begin();
  auto        j     = b.begin();
  while (i != a.end() && j != b.end())
  {
    if (*i < *j)
    {
      ++i;
    }
    else if (*j < *i)
    {
      ++j;
    }
    else
    {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double JaccardDistance(std::span<PointId const> p, std::span<PointId const> q)
{
  std::size_t const inter = IntersectionSize(p, q);
  std::size_t const uni   = p.size() + q.size() - inter;
  if (uni == 0)
  {
    return 0.0;
  }
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double TrailWeight(NeighborTable const &a, NeighborTable const &b, PointId x)
{
  CheckPair(a, b);
  CheckPoint(a, x);
  return 1.0 - static_cast<double>(IntersectionSize(a.Set(x), b.Set(x))) / a.k();
}

std::vector<double> TrailWeights(NeighborTable const &a, NeighborTable const &b)
{
  CheckPair(a, b);
  std::vector<double> out(a.rows());
  for (PointId x = 0; x < a.rows(); ++x)
  {
    out[x] = 1.0 - static_cast<double>(IntersectionSize(a.Set(x), b.Set(x))) / a.k();
  }
  return out;
}

std::uint64_t ChangeScore(PointId y, std::span<PointId const> selection, NeighborTable const &a,
                          NeighborTable const &b)
{
  CheckPair(a, b);
  CheckPoint(a, y);
  std::uint64_t total = 0;
  for (PointId x : selection)
  {
    CheckPoint(a, x);
    if (a.Contains(x, y))
    {
      continue;
    }
    if (auto rank = b.Rank(y, x))
    {
      total += b.k() - *rank;
    }
  }
  return total;
}

std::int64_t ChangeCriterion(PointId y, std::span<PointId const> selection, NeighborTable const &a,
                             NeighborTable const &b)
{
  return static_cast<std::int64_t>(ChangeScore(y, selection, a, b)) -
         static_cast<std::int64_t>(ChangeScore(y, selection, b, a));
}

CommonChanges ComputeCommonChanges(std::span<PointId const> selection, NeighborTable const &a,
                                   NeighborTable const &b, std::uint32_t top)
{
  CheckPair(a, b);
  auto const members = CheckedSortedSelection(selection, a.rows());

  // Accumulate both Change terms in one pass over the selection's rows.
  std::unordered_map<PointId, std::int64_t> criterion;
  auto accumulate = [&](NeighborTable const &from, NeighborTable const &to, std::int64_t sign) {
    for (PointId x : members)
    {
      auto const row = to.Row(x);
      for (std::uint32_t rank = 0; rank < row.size(); ++rank)
      {
        PointId const y = row[rank];
        if (!from.Contains(x, y) && !SortedContains(members, y))
        {
          criterion[y] += sign * static_cast<std::int64_t>(to.k() - rank);
        }
      }
    }
  };
  accumulate(a, b, +1);
  accumulate(b, a, -1);

  CommonChanges out;
  for (auto const &[id, value] : criterion)
  {
    if (value > 0)
    {
      out.added.push_back({id, value});
    }
    else if (value < 0)
    {
      out.removed.push_back({id, value});
    }
  }
  auto finish = [top](std::vector<ScoredPoint> &list, bool descending) {
    std::sort(list.begin(), list.end(), [descending](ScoredPoint const &l, ScoredPoint const &r) {
      if (l.value != r.value)
      {
        return descending ? l.value > r.value : l.value < r.value;
      }
      return l.id < r.id;
    });
    if (list.size() > top)
    {
      list.resize(top);
    }
  };
  finish(out.added, true);
  finish(out.removed, false);
  return out;
}

namespace {

// Full candidate list (unsorted by score) keyed by id.
std::vector<SelectionNeighbor> ScoreCandidates(std::span<PointId const> members,
                                               NeighborTable const &table)
{
  std::unordered_map<PointId, SelectionNeighbor> scores;
  for (PointId x : members)
  {
    auto const row = table.Row(x);
    for (std::uint32_t rank = 0; rank < row.size(); ++rank)
    {
      PointId const y = row[rank];
      if (SortedContains(members, y))
      {
        continue;
      }
      auto &entry = scores.try_emplace(y, SelectionNeighbor{y, 0, 0}).first->second;
      entry.score += table.k() - rank;
      entry.support += 1;
    }
  }
  std::vector<SelectionNeighbor> out;
  out.reserve(scores.size());
  for (auto const &[id, entry] : scores)
  {
    out.push_back(entry);
  }
  std::sort(out.begin(), out.end(), [](SelectionNeighbor const &l, SelectionNeighbor const &r) {
    return l.score != r.score ? l.score > r.score : l.id < r.id;
  });
  return out;
}

}  // namespace

std::vector<SelectionNeighbor> SelectionNeighbors(std::span<PointId const> selection,
                                                  NeighborTable const &table, std::uint32_t top)
{
  auto const members = CheckedSortedSelection(selection, table.rows());
  auto       out     = ScoreCandidates(members, table);
  if (out.size() > top)
  {
    out.resize(top);
  }
  return out;
}

char const *DiffFlagName(DiffFlag flag)
{
  switch (flag)
  {
  case DiffFlag::kCommon:
    return "common";
  case DiffFlag::kOnlyA:
    return "only_a";
  case DiffFlag::kOnlyB:
    return "only_b";
  }
  return "common";
}

NeighborDiff ComputeNeighborDiff(std::span<PointId const> selection, NeighborTable const &a,
                                 NeighborTable const &b, std::uint32_t top)
{
  CheckPair(a, b);
  auto const members = CheckedSortedSelection(selection, a.rows());

  auto candidate_ids = [&](NeighborTable const &t) {
    std::vector<PointId> ids;
    for (PointId x : members)
    {
      for (PointId y : t.Row(x))
      {
        if (!SortedContains(members, y))
        {
          ids.push_back(y);
        }
      }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  };
  auto const pool_a = candidate_ids(a);
  auto const pool_b = candidate_ids(b);

  NeighborDiff out;
  for (auto const &n : SelectionNeighbors(members, a, top))
  {
    out.in_a.push_back({n, SortedContains(pool_b, n.id) ? DiffFlag::kCommon : DiffFlag::kOnlyA});
  }
  for (auto const &n : SelectionNeighbors(members, b, top))
  {
    out.in_b.push_back({n, SortedContains(pool_a, n.id) ? DiffFlag::kCommon : DiffFlag::kOnlyB});
  }
  return out;
}

FrameComparison CompareFrames(NeighborTable const &a, NeighborTable const &b,
                              std::span<PointId const> selection, std::uint32_t top_changes,
                              std::uint32_t top_neighbors)
{
  FrameComparison out;
  out.frame_a       = a.frame_id();
  out.frame_b       = b.frame_id();
  out.trail_weights = TrailWeights(a, b);
  if (!selection.empty())
  {
    out.common = ComputeCommonChanges(selection, a, b, top_changes);
    out.diff   = ComputeNeighborDiff(selection, a, b, top_neighbors);
  }
  return out;
}

}  // namespace embscope
