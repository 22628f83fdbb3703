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

#include "embscope/suggest.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "embscope/compare.hpp"
#include "embscope/linkage.hpp"

namespace embscope {

using nlohmann::json;

namespace {

void CheckPair(NeighborTable const &a, NeighborTable const &b)
{
  Require(a.rows() == b.rows() && a.k() == b.k(), "neighbor tables are not comparable");
}

std::vector<PointId> Difference(std::span<PointId const> from, std::span<PointId const> minus)
{
  std::vector<PointId> out;
  std::set_difference(from.begin(), from.end(), minus.begin(), minus.end(), std::back_inserter(out));
  return out;
}

unsigned WorkerCount(unsigned requested, std::size_t jobs)
{
  unsigned const hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::clamp<std::size_t>(requested == 0 ? hw : requested, 1, std::max<std::size_t>(1, jobs)));
}

// Runs body(i) for i in [0, jobs) over a small worker pool.
template <typename Body>
void ParallelFor(std::size_t jobs, unsigned threads, Body &&body)
{
  std::atomic<std::size_t> next{0};
  auto                     worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++)
    {
      body(i);
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < WorkerCount(threads, jobs); ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
}

double SetSimilarity(std::span<PointId const> p, std::span<PointId const> q)
{
  return 1.0 - JaccardDistance(p, q);
}

}  // namespace

ChangeProfile BuildChangeProfile(NeighborTable const &a, NeighborTable const &b)
{
  CheckPair(a, b);
  ChangeProfile profile;
  profile.gained.resize(a.rows());
  profile.lost.resize(a.rows());
  for (PointId x = 0; x < a.rows(); ++x)
  {
    profile.gained[x] = Difference(b.Set(x), a.Set(x));
    profile.lost[x]   = Difference(a.Set(x), b.Set(x));
  }
  return profile;
}

double PointChangeDistance(ChangeProfile const &profile, PointId x, PointId y)
{
  return 0.5 * (JaccardDistance(profile.gained[x], profile.gained[y]) +
                JaccardDistance(profile.lost[x], profile.lost[y]));
}

double PointChangeDistance(PointId x, PointId y, NeighborTable const &a, NeighborTable const &b)
{
  CheckPair(a, b);
  if (x >= a.rows() || y >= a.rows())
  {
    Fail(ErrorKind::kInvalidArgument, "point id out of range");
  }
  auto const gx = Difference(b.Set(x), a.Set(x));
  auto const gy = Difference(b.Set(y), a.Set(y));
  auto const lx = Difference(a.Set(x), b.Set(x));
  auto const ly = Difference(a.Set(y), b.Set(y));
  return 0.5 * (JaccardDistance(gx, gy) + JaccardDistance(lx, ly));
}

std::vector<PointId> CandidatePoints(NeighborTable const &a, NeighborTable const &b, std::uint32_t m)
{
  Require(m >= 2, "candidate sample must be at least 2");
  auto const           weights = TrailWeights(a, b);
  std::vector<PointId> ids(a.rows());
  for (PointId i = 0; i < a.rows(); ++i)
  {
    ids[i] = i;
  }
  std::size_t const take = std::min<std::size_t>(m, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(),
                    [&](PointId l, PointId r) { return weights[l] != weights[r] ? weights[l] > weights[r] : l < r; });
  ids.resize(take);
  return ids;
}

std::string SuggestConfig::Hash() const
{
  std::ostringstream text;
  text.precision(17);
  text << "sample=" << sample << ";cutoffs=";
  for (double c : cutoffs)
  {
    text << c << ",";
  }
  text << ";size=" << min_size << "-" << max_size << ";dedupe=" << dedupe_similarity;
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : text.str())
  {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<ClusterCandidate> ClusterChanges(NeighborTable const &a, NeighborTable const &b,
                                             SuggestConfig const &config)
{
  CheckPair(a, b);
  auto const candidates = CandidatePoints(a, b, config.sample);
  auto const m          = static_cast<std::uint32_t>(candidates.size());
  if (m < 3)
  {
    return {};
  }

  auto const         profile = BuildChangeProfile(a, b);
  CondensedDistances distances(m);
  ParallelFor(m, config.threads, [&](std::size_t i) {
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < m; ++j)
    {
      distances.At(static_cast<std::uint32_t>(i), j) = PointChangeDistance(profile, candidates[i], candidates[j]);
    }
  });
  auto const merges = AverageLinkage(std::move(distances));

  std::vector<double> cutoffs = config.cutoffs;
  std::sort(cutoffs.begin(), cutoffs.end());
  std::vector<ClusterCandidate> kept;
  for (double cutoff : cutoffs)
  {
    for (auto const &members : FlatClusters(merges, m, cutoff))
    {
      if (members.size() < config.min_size || members.size() > config.max_size)
      {
        continue;
      }
      ClusterCandidate c{{}, cutoff};
      for (auto idx : members)
      {
        c.ids.push_back(candidates[idx]);
      }
      std::sort(c.ids.begin(), c.ids.end());
      bool const duplicate = std::any_of(kept.begin(), kept.end(), [&](ClusterCandidate const &k) {
        return SetSimilarity(k.ids, c.ids) >= config.dedupe_similarity;
      });
      if (!duplicate)
      {
        kept.push_back(std::move(c));
      }
    }
  }
  return kept;
}

InterestComponents AprioriInterest(std::span<PointId const> cluster, NeighborTable const &a,
                                   NeighborTable const &b)
{
  CheckPair(a, b);
  auto const members = CheckedSortedSelection(cluster, a.rows());
  if (members.size() < 2)
  {
    Fail(ErrorKind::kInvalidArgument, "interest needs a cluster of at least 2 points");
  }

  std::size_t pairs          = 0;
  double      change_total   = 0.0;
  double      overlap_total  = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i)
  {
    for (std::size_t j = i + 1; j < members.size(); ++j)
    {
      change_total += PointChangeDistance(members[i], members[j], a, b);
      overlap_total += static_cast<double>(IntersectionSize(a.Set(members[i]), a.Set(members[j]))) / a.k();
      ++pairs;
    }
  }

  double inner_total = 0.0;
  for (PointId x : members)
  {
    inner_total += DeltaInner(x, a, b, members);
  }
  double const inner_mean = inner_total / static_cast<double>(members.size());
  double const floor_value =
      1.0 / (1.0 + static_cast<double>(std::min<std::size_t>(a.k(), members.size() - 1)));

  InterestComponents out;
  out.consistency  = 1.0 - change_total / static_cast<double>(pairs);
  out.inner_change = std::clamp((inner_mean - floor_value) / (1.0 - floor_value), 0.0, 1.0);
  out.overlap      = overlap_total / static_cast<double>(pairs);
  return out;
}

std::vector<SuggestionCluster> BuildPairSuggestions(NeighborTable const &a, NeighborTable const &b,
                                                    SuggestConfig const &config)
{
  std::vector<SuggestionCluster> out;
  for (auto const &c : ClusterChanges(a, b, config))
  {
    for (int orientation = 0; orientation < 2; ++orientation)
    {
      auto const &from = orientation == 0 ? a : b;
      auto const &to   = orientation == 0 ? b : a;
      SuggestionCluster s;
      s.ids        = c.ids;
      s.frame_a    = from.frame_id();
      s.frame_b    = to.frame_id();
      s.cutoff     = c.cutoff;
      s.components = AprioriInterest(c.ids, from, to);
      s.interest   = s.components.Sum();
      out.push_back(std::move(s));
    }
  }
  return out;
}

SuggestionPool BuildSuggestionPool(std::span<NeighborTable const> tables, SuggestConfig const &config)
{
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < tables.size(); ++i)
  {
    for (std::size_t j = i + 1; j < tables.size(); ++j)
    {
      pairs.emplace_back(i, j);
    }
  }
  std::vector<std::vector<SuggestionCluster>> per_pair(pairs.size());
  SuggestConfig                               inner = config;
  inner.threads                                     = 1;
  ParallelFor(pairs.size(), config.threads, [&](std::size_t p) {
    per_pair[p] = BuildPairSuggestions(tables[pairs[p].first], tables[pairs[p].second],
                                       pairs.size() == 1 ? config : inner);
  });
  SuggestionPool pool;
  for (auto &clusters : per_pair)
  {
    std::move(clusters.begin(), clusters.end(), std::back_inserter(pool.clusters));
  }
  return pool;
}

std::vector<RankedSuggestion> RankSuggestions(ViewState const &state, SuggestionPool const &pool,
                                              std::span<NeighborTable const> tables,
                                              std::span<Coords const> projections, std::uint32_t top,
                                              RankWeights const &weights)
{
  Require(state.current_frame < tables.size(), "current frame out of range");
  Require(!state.comparison_frame || *state.comparison_frame < tables.size(), "comparison frame out of range");
  Require(projections.size() == tables.size(), "projection count mismatch");
  auto const &current = tables[state.current_frame];
  auto const &coords  = projections[state.current_frame];

  // Selection plus its current-frame neighborhoods.
  std::vector<PointId> context;
  auto const           selection = CheckedSortedSelection(state.selection, current.rows(), true);
  for (PointId x : selection)
  {
    context.push_back(x);
    auto const row = current.Row(x);
    context.insert(context.end(), row.begin(), row.end());
  }
  std::sort(context.begin(), context.end());
  context.erase(std::unique(context.begin(), context.end()), context.end());

  std::vector<RankedSuggestion> ranked;
  for (auto const &c : pool.clusters)
  {
    if (c.frame_a != state.current_frame)
    {
      continue;
    }
    if (state.comparison_frame && c.frame_b != *state.comparison_frame)
    {
      continue;
    }
    RankedSuggestion r;
    r.cluster = c;
    if (state.viewport)
    {
      std::size_t inside = 0;
      for (PointId id : c.ids)
      {
        inside += state.viewport->Contains(coords[id]) ? 1 : 0;
      }
      r.viewport_fraction = static_cast<double>(inside) / static_cast<double>(c.ids.size());
    }
    else
    {
      r.viewport_fraction = 1.0;
    }
    r.selection_similarity = selection.empty() ? 0.0 : SetSimilarity(c.ids, context);
    r.relevance            = weights.viewport * r.viewport_fraction + weights.selection * r.selection_similarity;
    r.score                = c.interest + weights.relevance * r.relevance;
    ranked.push_back(std::move(r));
  }

  std::sort(ranked.begin(), ranked.end(), [](RankedSuggestion const &l, RankedSuggestion const &r) {
    if (l.score != r.score)
    {
      return l.score > r.score;
    }
    if (l.cluster.ids != r.cluster.ids)
    {
      return l.cluster.ids < r.cluster.ids;
    }
    return std::pair(l.cluster.frame_a, l.cluster.frame_b) < std::pair(r.cluster.frame_a, r.cluster.frame_b);
  });
  if (ranked.size() > top)
  {
    ranked.resize(top);
  }
  for (auto &r : ranked)
  {
    r.stripe = ComputeColorStripe(tables, r.cluster.ids);
  }
  return ranked;
}

std::string SerializePairPool(std::vector<SuggestionCluster> const &clusters, FrameId a, FrameId b,
                              std::string const &config_hash)
{
  json list = json::array();
  for (auto const &c : clusters)
  {
    list.push_back({{"ids", c.ids},
                    {"frame_a", c.frame_a},
                    {"frame_b", c.frame_b},
                    {"cutoff", c.cutoff},
                    {"interest", c.interest},
                    {"consistency", c.components.consistency},
                    {"inner_change", c.components.inner_change},
                    {"overlap", c.components.overlap}});
  }
  json doc = {{"version", 1}, {"config_hash", config_hash}, {"frames", {a, b}}, {"clusters", list}};
  return doc.dump(1);
}

std::vector<SuggestionCluster> DeserializePairPool(std::string const &text, std::string *config_hash)
{
  std::vector<SuggestionCluster> out;
  try
  {
    json const doc = json::parse(text);
    if (config_hash)
    {
      *config_hash = doc.at("config_hash").get<std::string>();
    }
    for (auto const &c : doc.at("clusters"))
    {
      SuggestionCluster s;
      s.ids                     = c.at("ids").get<std::vector<PointId>>();
      s.frame_a                 = c.at("frame_a").get<FrameId>();
      s.frame_b                 = c.at("frame_b").get<FrameId>();
      s.cutoff                  = c.at("cutoff").get<double>();
      s.interest                = c.at("interest").get<double>();
      s.components.consistency  = c.at("consistency").get<double>();
      s.components.inner_change = c.at("inner_change").get<double>();
      s.components.overlap      = c.at("overlap").get<double>();
      out.push_back(std::move(s));
    }
  }
  catch (json::exception const &e)
  {
    Fail(ErrorKind::kFormat, std::string("suggestion pool: ") + e.what());
  }
  return out;
}

}  // namespace embscope
