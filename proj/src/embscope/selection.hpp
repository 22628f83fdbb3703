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

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embscope/error.hpp"

namespace embscope {

/// An ordered set of point ids plus user-facing metadata.
struct Selection
{
  std::vector<PointId>       ids;
  std::string                name;
  std::optional<std::string> notes;
};

/// Checks ids are < n and distinct; returns them sorted. Throws on an empty
/// selection unless `allow_empty`.
inline std::vector<PointId> CheckedSortedSelection(std::span<PointId const> ids, std::uint32_t n,
                                                   bool allow_empty = false)
{
  if (ids.empty() && !allow_empty)
  {
    Fail(ErrorKind::kInvalidArgument, "empty selection");
  }
  std::vector<PointId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
  {
    if (sorted[i] >= n)
    {
      Fail(ErrorKind::kInvalidArgument, "point id " + std::to_string(sorted[i]) + " out of range");
    }
    if (i > 0 && sorted[i] == sorted[i - 1])
    {
      Fail(ErrorKind::kInvalidArgument, "duplicate point id " + std::to_string(sorted[i]));
    }
  }
  return sorted;
}

inline bool SortedContains(std::span<PointId const> sorted, PointId id)
{
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace embscope
