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
#include <filesystem>
#include <span>
#include <vector>

#include "embscope/dataset.hpp"

namespace embscope {

// EMBF: "EMBF", u32 version=1, u32 rows, u32 cols, rows*cols float32, all little-endian.
// EMBN: "EMBN", u32 version=1, u32 rows, u32 k,    rows*k u32 ids (rank order).

inline constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::uint8_t> EncodeMatrix(Matrix const &m);
Matrix                    DecodeMatrix(std::span<std::uint8_t const> bytes);

Matrix ReadMatrix(std::filesystem::path const &path);
void   WriteMatrix(std::filesystem::path const &path, Matrix const &m);

struct NeighborIds
{
  std::uint32_t              rows = 0;
  std::uint32_t              k    = 0;
  std::vector<std::uint32_t> ids;

  bool operator==(NeighborIds const &) const = default;
};

std::vector<std::uint8_t> EncodeNeighborIds(NeighborIds const &n);
NeighborIds               DecodeNeighborIds(std::span<std::uint8_t const> bytes);

NeighborIds ReadNeighborIds(std::filesystem::path const &path);
void        WriteNeighborIds(std::filesystem::path const &path, NeighborIds const &n);

std::vector<std::uint8_t> ReadFileBytes(std::filesystem::path const &path);
void WriteFileBytes(std::filesystem::path const &path, std::span<std::uint8_t const> bytes);

}  // namespace embscope
