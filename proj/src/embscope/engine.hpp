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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "embscope/align.hpp"
#include "embscope/dataset.hpp"
#include "embscope/neighbors.hpp"
#include "embscope/suggest.hpp"

namespace embscope {

struct PrecomputeOptions
{
  std::optional<std::uint32_t> k;       // default: manifest k
  std::optional<Metric>        metric;  // default: per-frame manifest metric
  SuggestConfig                suggest;
  unsigned                     threads = 0;
};

struct PrecomputeReport
{
  std::vector<bool> neighbor_cache_hit;  // per frame
  std::vector<bool> pool_cache_hit;      // per unordered pair
  std::string       config_hash;
};

using LogSink = std::function<void(std::string const &)>;

/// Everything the service needs, fully materialized: the validated dataset,
/// one neighbor table and resolved projection per frame, and the suggestion
/// pool. Immutable once opened.
class Engine
{
public:
  /// Loads `data_dir/manifest.json`, then loads or computes every cache under
  /// `data_dir/cache`. Cached entries are reused when their keys match.
  static Engine Open(std::filesystem::path const &data_dir, PrecomputeOptions const &options = {},
                     PrecomputeReport *report = nullptr, LogSink const &log = {});

  /// Open() with the options recorded by the last precompute run in
  /// `data_dir`, or defaults when there was none.
  static Engine OpenWithRecordedOptions(std::filesystem::path const &data_dir,
                                        PrecomputeReport *report = nullptr, LogSink const &log = {});

  Dataset const &dataset() const
  {
    return dataset_;
  }
  std::vector<NeighborTable> const &tables() const
  {
    return tables_;
  }
  std::vector<FrameProjection> const &projections() const
  {
    return projections_;
  }
  std::vector<Coords> const &coords() const
  {
    return coords_;
  }
  SuggestionPool const &pool() const
  {
    return pool_;
  }
  std::filesystem::path const &data_dir() const
  {
    return data_dir_;
  }
  std::string const &config_hash() const
  {
    return config_hash_;
  }

  NeighborTable const  &table(FrameId f) const;
  EmbeddingFrame const &frame(FrameId f) const;

private:
  std::filesystem::path        data_dir_;
  Dataset                      dataset_;
  std::vector<NeighborTable>   tables_;
  std::vector<FrameProjection> projections_;
  std::vector<Coords>          coords_;
  SuggestionPool               pool_;
  std::string                  config_hash_;
};

std::filesystem::path CacheDir(std::filesystem::path const &data_dir);
std::filesystem::path PairPoolPath(std::filesystem::path const &data_dir, FrameId a, FrameId b);

/// Writes a pair's pool file (both orientations) to `out`.
void ExportSuggestions(Engine const &engine, FrameId a, FrameId b, std::filesystem::path const &out);

}  // namespace embscope
