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

#include "embscope/stripes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "embscope/linkage.hpp"

namespace embscope {
namespace {

// (|N_A(x) ∩ N_B(x) ∩ S|, |N_A(x) ∩ N_B(x) \ S|)
std::pair<std::size_t, std::size_t> SharedCounts(PointId x, NeighborTable const &a,
                                                 NeighborTable const &b,
                                                 std::span<PointId const> selection)
{
  Require(a.rows() == b.rows(), "neighbor tables are not comparable");
  if (x >= a.rows())
  {
    Fail(ErrorKind::kInvalidArgument, "point id " + std::to_string(x) + " out of range");
  }
  auto const  sa    = a.Set(x);
  auto const  sb    = b.Set(x);
  std::size_t inner = 0;
  std::size_t outer = 0;
  auto        i     = sa.begin();
  auto        j     = sb.begin();
  while (i != sa.end() && j != sb.end())
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
      (SortedContains(selection, *i) ? inner : outer) += 1;
      ++i;
      ++j;
    }
  }
  return {inner, outer};
}

}  // namespace

double DeltaInner(PointId x, NeighborTable const &a, NeighborTable const &b,
                  std::span<PointId const> selection)
{
  return 1.0 / (1.0 + static_cast<double>(SharedCounts(x, a, b, selection).first));
}

double DeltaOuter(PointId x, NeighborTable const &a, NeighborTable const &b,
                  std::span<PointId const> selection)
{
  return 1.0 / (1.0 + static_cast<double>(SharedCounts(x, a, b, selection).second));
}

double FrameDistance(NeighborTable const &a, NeighborTable const &b, std::span<PointId const> selection)
{
  auto const members = CheckedSortedSelection(selection, a.rows());
  double     total   = 0.0;
  for (PointId x : members)
  {
    auto const [inner, outer] = SharedCounts(x, a, b, members);
    total += 1.0 / (1.0 + static_cast<double>(inner)) + 1.0 / (1.0 + static_cast<double>(outer));
  }
  return total / (2.0 * static_cast<double>(members.size()));
}

FrameDistanceMatrix ComputeFrameDistanceMatrix(std::span<NeighborTable const> tables,
                                               std::span<PointId const> selection)
{
  Require(!tables.empty(), "no frames");
  FrameDistanceMatrix m;
  m.selection = CheckedSortedSelection(selection, tables.front().rows());
  m.frames    = static_cast<std::uint32_t>(tables.size());
  m.values.assign(static_cast<std::size_t>(m.frames) * m.frames, 0.0);
  for (std::uint32_t i = 0; i < m.frames; ++i)
  {
    for (std::uint32_t j = i; j < m.frames; ++j)
    {
      double const d              = FrameDistance(tables[i], tables[j], m.selection);
      m.values[i * m.frames + j] = d;
      m.values[j * m.frames + i] = d;
    }
  }
  return m;
}

namespace {

using Sequence = std::vector<std::uint32_t>;

// Leaf order of the dendrogram with each merge's children flipped so that the
// two leaves meeting at the join are as close as possible.
Sequence OrientedLeafOrder(std::vector<Merge> const &merges, std::uint32_t n,
                           FrameDistanceMatrix const &m)
{
  std::vector<Sequence> seq(n + merges.size());
  for (std::uint32_t i = 0; i < n; ++i)
  {
    seq[i] = {i};
  }
  for (std::size_t i = 0; i < merges.size(); ++i)
  {
    Sequence left  = seq[merges[i].left];
    Sequence right = seq[merges[i].right];
    // Candidate joins: (L,R), (L,rev R), (rev L,R), (rev L,rev R).
    double best     = 0.0;
    int    best_opt = -1;
    for (int opt = 0; opt < 4; ++opt)
    {
      std::uint32_t const tail = (opt & 2) ? left.front() : left.back();
      std::uint32_t const head = (opt & 1) ? right.back() : right.front();
      double const        d    = m.At(tail, head);
      if (best_opt < 0 || d < best)
      {
        best     = d;
        best_opt = opt;
      }
    }
    if (best_opt & 2)
    {
      std::reverse(left.begin(), left.end());
    }
    if (best_opt & 1)
    {
      std::reverse(right.begin(), right.end());
    }
    left.insert(left.end(), right.begin(), right.end());
    seq[n + i] = std::move(left);
  }
  return seq.back();
}

std::vector<double> RingArcs(Sequence const &ring, FrameDistanceMatrix const &m)
{
  std::vector<double> arcs(ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i)
  {
    arcs[i] = m.At(ring[i], ring[(i + 1) % ring.size()]);
  }
  return arcs;
}

std::vector<double> MaxRotation(std::vector<double> const &arcs)
{
  std::vector<double> best = arcs;
  std::vector<double> rotated(arcs.size());
  for (std::size_t s = 1; s < arcs.size(); ++s)
  {
    std::rotate_copy(arcs.begin(), arcs.begin() + static_cast<std::ptrdiff_t>(s), arcs.end(),
                     rotated.begin());
    best = std::max(best, rotated);
  }
  return best;
}

}  // namespace

ColorStripe AssignStripeColors(FrameDistanceMatrix const &m, StripeParams const &params)
{
  std::uint32_t const f = m.frames;
  Require(f >= 1 && m.values.size() == static_cast<std::size_t>(f) * f, "invalid frame distance matrix");

  ColorStripe stripe;
  for (std::uint32_t i = 0; i < f; ++i)
  {
    stripe.baseline = std::max(stripe.baseline, m.At(i, i));
    for (std::uint32_t j = i + 1; j < f; ++j)
    {
      stripe.max_distance = std::max(stripe.max_distance, m.At(i, j));
    }
  }

  Sequence ring{0};
  if (f > 1)
  {
    CondensedDistances condensed(f);
    for (std::uint32_t i = 0; i < f; ++i)
    {
      for (std::uint32_t j = i + 1; j < f; ++j)
      {
        condensed.At(i, j) = m.At(i, j);
      }
    }
    ring = OrientedLeafOrder(AverageLinkage(condensed), f, m);

    // Fix the traversal direction from the distances alone, so relabeling
    // frames only rotates the ring.
    Sequence backward{ring.front()};
    backward.insert(backward.end(), ring.rbegin(), ring.rend() - 1);
    if (MaxRotation(RingArcs(backward, m)) > MaxRotation(RingArcs(ring, m)))
    {
      ring = std::move(backward);
    }
  }
  stripe.ring_order.assign(ring.begin(), ring.end());

  std::vector<double> const arcs      = RingArcs(ring, m);
  double                    perimeter = 0.0;
  for (double a : arcs)
  {
    perimeter += a;
  }

  if (f > 1)
  {
    double const span = params.saturation_distance - stripe.baseline;
    double const excess = stripe.max_distance - stripe.baseline;
    double const ratio  = span > 0.0 ? std::clamp(excess / span, 0.0, 1.0) : (excess > 0.0 ? 1.0 : 0.0);
    stripe.chroma       = params.max_chroma * ratio;
  }

  stripe.colors.resize(f);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i)
  {
    double const hue = perimeter > 0.0 ? 360.0 * cumulative / perimeter
                                       : 360.0 * static_cast<double>(i) / static_cast<double>(f);
    cumulative += arcs[i];
    double const radians = hue * std::numbers::pi / 180.0;
    FrameColor   color;
    color.hue_degrees = hue;
    color.lab         = {params.lightness, stripe.chroma * std::cos(radians),
                         stripe.chroma * std::sin(radians)};
    color.srgb        = LabToSrgb(color.lab);
    stripe.colors[ring[i]] = color;
  }
  return stripe;
}

ColorStripe ComputeColorStripe(std::span<NeighborTable const> tables, std::span<PointId const> selection,
                               StripeParams const &params)
{
  return AssignStripeColors(ComputeFrameDistanceMatrix(tables, selection), params);
}

}  // namespace embscope
