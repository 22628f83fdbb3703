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

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "embscope/dataset.hpp"
#include "embscope/neighbors.hpp"

namespace embscope {

using Point2 = std::array<double, 2>;
using Coords = std::vector<Point2>;

/// Similarity transform p -> scale * R p + t, with R a proper rotation.
struct Transform2D
{
  std::array<std::array<double, 2>, 2> rotation{{{1.0, 0.0}, {0.0, 1.0}}};
  double                               scale = 1.0;
  Point2                               translation{0.0, 0.0};

  static Transform2D Identity()
  {
    return {};
  }

  Point2 Apply(Point2 const &p) const
  {
    return {scale * (rotation[0][0] * p[0] + rotation[0][1] * p[1]) + translation[0],
            scale * (rotation[1][0] * p[0] + rotation[1][1] * p[1]) + translation[1]};
  }

  double Determinant() const
  {
    return rotation[0][0] * rotation[1][1] - rotation[0][1] * rotation[1][0];
  }
};

Coords ApplyTransform(Transform2D const &t, std::span<Point2 const> points);

/// Weighted sum of squared distances between t(source) and target.
double ProcrustesResidual(Transform2D const &t, std::span<Point2 const> source,
                          std::span<Point2 const> target, std::span<double const> weights = {});

/// Least-squares similarity transform (rotation, uniform scale, translation;
/// never a reflection) taking `source` onto `target`. Empty `weights` means
/// uniform. Throws kDegenerate when the weighted source collapses to a point
/// or the total weight is zero.
Transform2D Procrustes(std::span<Point2 const> source, std::span<Point2 const> target,
                       std::span<double const> weights = {});

struct AlignedProjections
{
  std::vector<Transform2D>            transforms;  // indexed by frame
  FrameId                             reference = 0;
  std::optional<std::vector<PointId>> anchor;
};

/// Maps every frame's projection into the reference frame's coordinates.
/// With an anchor, only the anchor points drive the fit.
AlignedProjections AlignFrames(std::span<Coords const> projections, FrameId reference,
                               std::optional<std::span<PointId const>> anchor = std::nullopt);

/// Top-2 principal component scores of the mean-centered vectors. Each axis is
/// signed so its largest-magnitude loading is positive.
Coords PcaProject(EmbeddingFrame const &frame);

struct FrameProjection
{
  Coords coords;
  bool   fallback = false;  // computed by PCA because none was ingested
};

std::vector<FrameProjection> ResolveProjections(Dataset const &d);

inline constexpr std::uint32_t kDefaultVicinity = 10;

/// S plus, in every frame, the first `vicinity` neighbors of each member.
std::vector<PointId> IsolateSet(std::span<PointId const> selection,
                                std::span<NeighborTable const> tables,
                                std::uint32_t vicinity = kDefaultVicinity);

/// Points within `radius` of `center` in the frame's high-dimensional space,
/// center included, sorted by id.
std::vector<PointId> RadiusSelect(EmbeddingFrame const &frame, PointId center, double radius);

/// Median distance from `center` to its k listed neighbors.
double DefaultRadius(EmbeddingFrame const &frame, NeighborTable const &table, PointId center);

}  // namespace embscope
