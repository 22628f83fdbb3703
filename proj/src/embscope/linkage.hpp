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
#include <vector>

namespace embscope {

/// Upper-triangle distance matrix over n items.
class CondensedDistances
{
public:
  explicit CondensedDistances(std::uint32_t n)
    : n_(n)
    , values_(n < 2 ? 0 : static_cast<std::size_t>(n) * (n - 1) / 2, 0.0)
  {}

  std::uint32_t size() const
  {
    return n_;
  }

  double &At(std::uint32_t i, std::uint32_t j)
  {
    return values_[Index(i, j)];
  }

  double At(std::uint32_t i, std::uint32_t j) const
  {
    return i == j ? 0.0 : values_[Index(i, j)];
  }

  std::vector<double> &values()
  {
    return values_;
  }

private:
  std::size_t Index(std::uint32_t i, std::uint32_t j) const
  {
    if (i > j)
    {
      std::swap(i, j);
    }
    return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
  }

  std::uint32_t       n_;
  std::vector<double> values_;
};

/// One agglomeration step. Ids < n are leaves; id n + i is the cluster formed
/// by the i-th merge (the scipy linkage convention).
struct Merge
{
  std::uint32_t left;
  std::uint32_t right;
  double        height;
  std::uint32_t size;
};

/// Average-linkage (UPGMA) agglomerative clustering via the nearest-neighbor
/// chain algorithm, O(n^2) time and memory. Merges are returned in ascending
/// height; ties resolve deterministically toward lower indices.
std::vector<Merge> AverageLinkage(CondensedDistances distances);

/// Leaves of the dendrogram, left to right.
std::vector<std::uint32_t> LeafOrder(std::vector<Merge> const &merges, std::uint32_t n);

/// Flat clusters whose members are joined at heights <= cutoff. Each cluster
/// is sorted; clusters are ordered by smallest member.
std::vector<std::vector<std::uint32_t>> FlatClusters(std::vector<Merge> const &merges,
                                                     std::uint32_t n, double cutoff);

}  // namespace embscope
