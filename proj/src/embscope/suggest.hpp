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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embscope/align.hpp"
#include "embscope/neighbors.hpp"
#include "embscope/stripes.hpp"

namespace embscope {

/// Per-point neighbors gained (N_B \ N_A) and lost (N_A \ N_B) between two frames.
struct ChangeProfile
{
  std::vector<std::vector<PointId>> gained;
  std::vector<std::vector<PointId>> lost;
};

ChangeProfile BuildChangeProfile(NeighborTable const &a, NeighborTable const &b);

/// ½·[J(gained(x), gained(y)) + J(lost(x), lost(y))]; symmetric in (A,B).
double PointChangeDistance(PointId x, PointId y, NeighborTable const &a, NeighborTable const &b);
double PointChangeDistance(ChangeProfile const &profile, PointId x, PointId y);

/// The `m` points with the largest trail weight, ties by ascending id.
std::vector<PointId> CandidatePoints(NeighborTable const &a, NeighborTable const &b, std::uint32_t m);

struct SuggestConfig
{
  std::uint32_t       sample   = 2000;
  std::vector<double> cutoffs  = {0.4, 0.6, 0.8};
  std::uint32_t       min_size = 3;
  std::uint32_t       max_size = 50;
  double              dedupe_similarity = 0.8;
  unsigned            threads  = 0;

  /// Stable digest of every field that changes the pool contents.
  std::string Hash() const;
};

struct ClusterCandidate
{
  std::vector<PointId> ids;  // sorted
  double               cutoff = 0.0;
};

/// Average-linkage clustering of the candidate points under the point change
/// distance, cut at each configured height; clusters outside the size bounds
/// are dropped and near-duplicates (id-set Jaccard similarity >= the dedupe
/// threshold) keep the lowest-cutoff version.
std::vector<ClusterCandidate> ClusterChanges(NeighborTable const &a, NeighborTable const &b,
                                             SuggestConfig const &config = {});

struct InterestComponents
{
  double consistency  = 0.0;
  double inner_change = 0.0;
  double overlap      = 0.0;

  double Sum() const
  {
    return consistency + inner_change + overlap;
  }
};

/// consistency: 1 - mean pairwise point change distance.
/// inner_change: mean Δ_inner over members with S = the cluster, rescaled so
///   the smallest attainable value maps to 0 and 1 stays 1.
/// overlap: mean over member pairs of |N_A(x) ∩ N_A(y)| / k.
InterestComponents AprioriInterest(std::span<PointId const> cluster, NeighborTable const &a,
                                   NeighborTable const &b);

struct SuggestionCluster
{
  std::vector<PointId> ids;  // sorted
  FrameId              frame_a = 0;
  FrameId              frame_b = 0;
  double               cutoff  = 0.0;
  InterestComponents   components;
  double               interest = 0.0;
};

/// Clusters for one unordered pair, scored in both orientations.
std::vector<SuggestionCluster> BuildPairSuggestions(NeighborTable const &a, NeighborTable const &b,
                                                    SuggestConfig const &config = {});

struct SuggestionPool
{
  std::vector<SuggestionCluster> clusters;
};

/// Pool over every unordered frame pair; pairs are processed in parallel.
SuggestionPool BuildSuggestionPool(std::span<NeighborTable const> tables, SuggestConfig const &config = {});

struct Viewport
{
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool Contains(Point2 const &p) const
  {
    return p[0] >= min_x && p[0] <= max_x && p[1] >= min_y && p[1] <= max_y;
  }
};

struct ViewState
{
  FrameId                 current_frame = 0;
  std::optional<FrameId>  comparison_frame;
  std::vector<PointId>    selection;
  std::optional<Viewport> viewport;  // absent: everything is in view
};

struct RankWeights
{
  double viewport  = 0.5;
  double selection = 0.5;
  double relevance = 2.0;
};

struct RankedSuggestion
{
  SuggestionCluster cluster;
  double            viewport_fraction    = 0.0;
  double            selection_similarity = 0.0;
  double            relevance            = 0.0;
  double            score                = 0.0;
  ColorStripe       stripe;
};

/// Degree-of-interest ranking against the live view. Keeps clusters with
/// frame_a == current_frame (and frame_b == comparison_frame when set), scores
/// interest + w·relevance, and attaches a Color Stripe to each result.
std::vector<RankedSuggestion> RankSuggestions(ViewState const &state, SuggestionPool const &pool,
                                              std::span<NeighborTable const> tables,
                                              std::span<Coords const> projections,
                                              std::uint32_t top = 10, RankWeights const &weights = {});

std::string SerializePairPool(std::vector<SuggestionCluster> const &clusters, FrameId a, FrameId b,
                              std::string const &config_hash);
std::vector<SuggestionCluster> DeserializePairPool(std::string const &text,
                                                   std::string *config_hash = nullptr);

}  // namespace embscope
