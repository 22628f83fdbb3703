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

#include "embscope/linkage.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace embscope {
namespace {

class DisjointSets
{
public:
  explicit DisjointSets(std::size_t n)
    : parent_(n)
  {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t Find(std::uint32_t x)
  {
    while (parent_[x] != x)
    {
      parent_[x] = parent_[parent_[x]];
      x          = parent_[x];
    }
    return x;
  }

  void Attach(std::uint32_t child_root, std::uint32_t parent_root)
  {
    parent_[child_root] = parent_root;
  }

private:
  std::vector<std::uint32_t> parent_;
};

struct SlotMerge
{
  std::uint32_t a;
  std::uint32_t b;
  double        height;
};

}  // namespace

std::vector<Merge> AverageLinkage(CondensedDistances d)
{
  std::uint32_t const n = d.size();
  if (n < 2)
  {
    return {};
  }

  std::vector<bool>          active(n, true);
  std::vector<std::uint32_t> size(n, 1);
  std::vector<std::uint32_t> chain;
  std::vector<SlotMerge>     slot_merges;
  slot_merges.reserve(n - 1);
  // Height of the latest merge into each slot; keeps recorded heights monotone
  // along the tree even if the distance updates round slightly downward.
  std::vector<double> slot_height(n, 0.0);
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t first_active = 0;
  while (slot_merges.size() + 1 < n)
  {
    if (chain.empty())
    {
      while (!active[first_active])
      {
        ++first_active;
      }
      chain.push_back(first_active);
    }

    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double        best = 0.0;
    for (;;)
    {
      a                       = chain.back();
      std::uint32_t const prev = chain.size() >= 2 ? chain[chain.size() - 2] : kNone;
      // The previous chain element wins ties, which guarantees termination.
      b    = prev;
      best = prev == kNone ? std::numeric_limits<double>::infinity() : d.At(a, prev);
      for (std::uint32_t c = 0; c < n; ++c)
      {
        if (c == a || !active[c])
        {
          continue;
        }
        double const dc = d.At(a, c);
        if (dc < best || (dc == best && b != prev && c < b))
        {
          best = dc;
          b    = c;
        }
      }
      if (b == prev)
      {
        break;
      }
      chain.push_back(b);
    }
    chain.pop_back();
    chain.pop_back();

    // Merge b into a's slot, updating distances by the Lance-Williams rule.
    std::uint32_t const keep = std::min(a, b);
    std::uint32_t const drop = std::max(a, b);
    double const        sk   = size[keep];
    double const        sd   = size[drop];
    for (std::uint32_t c = 0; c < n; ++c)
    {
      if (!active[c] || c == keep || c == drop)
      {
        continue;
      }
      d.At(keep, c) = (sk * d.At(keep, c) + sd * d.At(drop, c)) / (sk + sd);
    }
    active[drop] = false;
    size[keep] += size[drop];
    double const height = std::max({best, slot_height[keep], slot_height[drop]});
    slot_height[keep]   = height;
    slot_merges.push_back({keep, drop, height});
  }

  std::stable_sort(slot_merges.begin(), slot_merges.end(),
                   [](SlotMerge const &l, SlotMerge const &r) { return l.height < r.height; });

  // Relabel slot merges into the leaf/cluster id convention.
  DisjointSets               sets(n);
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::vector<std::uint32_t> cluster_size(n, 1);
  std::vector<Merge>         merges;
  merges.reserve(n - 1);
  for (auto const &m : slot_merges)
  {
    std::uint32_t const ra = sets.Find(m.a);
    std::uint32_t const rb = sets.Find(m.b);
    std::uint32_t       la = label[ra];
    std::uint32_t       lb = label[rb];
    if (la > lb)
    {
      std::swap(la, lb);
    }
    std::uint32_t const total = cluster_size[ra] + cluster_size[rb];
    merges.push_back({la, lb, m.height, total});
    sets.Attach(rb, ra);
    cluster_size[ra] = total;
    label[ra]        = n + static_cast<std::uint32_t>(merges.size() - 1);
  }
  return merges;
}

std::vector<std::uint32_t> LeafOrder(std::vector<Merge> const &merges, std::uint32_t n)
{
  if (n == 0)
  {
    return {};
  }
  if (merges.empty())
  {
    return {0};
  }
  std::vector<std::uint32_t> out;
  out.reserve(n);
  std::vector<std::uint32_t> stack{n + static_cast<std::uint32_t>(merges.size()) - 1};
  while (!stack.empty())
  {
    std::uint32_t const id = stack.back();
    stack.pop_back();
    if (id < n)
    {
      out.push_back(id);
      continue;
    }
    auto const &m = merges[id - n];
    stack.push_back(m.right);
    stack.push_back(m.left);
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> FlatClusters(std::vector<Merge> const &merges,
                                                     std::uint32_t n, double cutoff)
{
  DisjointSets sets(n);
  std::vector<std::uint32_t> representative(n + merges.size());
  std::iota(representative.begin(), representative.begin() + n, 0u);
  for (std::size_t i = 0; i < merges.size(); ++i)
  {
    auto const &m = merges[i];
    std::uint32_t const ra = sets.Find(representative[m.left]);
    std::uint32_t const rb = sets.Find(representative[m.right]);
    representative[n + i]  = ra;
    if (m.height <= cutoff)
    {
      sets.Attach(rb, ra);
    }
  }

  std::vector<std::vector<std::uint32_t>> by_root(n);
  for (std::uint32_t i = 0; i < n; ++i)
  {
    by_root[sets.Find(i)].push_back(i);
  }
  std::vector<std::vector<std::uint32_t>> out;
  for (auto &members : by_root)
  {
    if (!members.empty())
    {
      out.push_back(std::move(members));
    }
  }
  std::sort(out.begin(), out.end(), [](auto const &l, auto const &r) { return l.front() < r.front(); });
  return out;
}

}  // namespace embscope
