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

#include <span>
#include <vector>

#include "embscope/color.hpp"
#include "embscope/neighbors.hpp"
#include "embscope/selection.hpp"

namespace embscope {

/// 1 / (1 + |N_A(x) ∩ N_B(x) ∩ S|). `selection` must be id-sorted.
double DeltaInner(PointId x, NeighborTable const &a, NeighborTable const &b,
                  std::span<PointId const> selection);

/// 1 / (1 + |N_A(x) ∩ N_B(x) \ S|). `selection` must be id-sorted.
double DeltaOuter(PointId x, NeighborTable const &a, NeighborTable const &b,
                  std::span<PointId const> selection);

/// Frame distance for a selection: mean over x in S of (Δ_inner + Δ_outer) / 2.
/// Note d(A,A;S) is not zero.
double FrameDistance(NeighborTable const &a, NeighborTable const &b, std::span<PointId const> selection);

struct FrameDistanceMatrix
{
  std::vector<PointId> selection;  // sorted
  std::uint32_t        frames = 0;
  std::vector<double>  values;     // frames x frames, row-major

  double At(std::size_t i, std::size_t j) const
  {
    return values[i * frames + j];
  }
};

/// All pairs including the diagonal. `tables[i]` must belong to frame i.
FrameDistanceMatrix ComputeFrameDistanceMatrix(std::span<NeighborTable const> tables,
                                               std::span<PointId const> selection);

struct StripeParams
{
  double lightness  = 60.0;
  double max_chroma = 50.0;
  double saturation_distance = 0.8;
};

struct FrameColor
{
  Lab    lab;
  Rgb    srgb;
  double hue_degrees = 0.0;
};

struct ColorStripe
{
  std::vector<FrameColor> colors;        // indexed by frame id
  std::vector<FrameId>    ring_order;    // frames in ring order, starting at hue 0
  double                  max_distance = 0.0;  // largest off-diagonal entry
  double                  baseline     = 0.0;  // largest self-distance (gray point)
  double                  chroma       = 0.0;
};

/// Places frames on a CIELAB hue ring. Frames are ordered by the leaf order of
/// an average-linkage clustering of the off-diagonal distances (children
/// oriented to keep adjacent leaves close), hues are spaced by cumulative
/// ring distance, and chroma grows with how far the largest off-diagonal
/// distance exceeds the self-distance baseline.
ColorStripe AssignStripeColors(FrameDistanceMatrix const &m, StripeParams const &params = {});

/// Frame distance matrix + stripe for a selection, in one call.
ColorStripe ComputeColorStripe(std::span<NeighborTable const> tables, std::span<PointId const> selection,
                               StripeParams const &params = {});

}  // namespace embscope
