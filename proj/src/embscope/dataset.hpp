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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embscope/error.hpp"

namespace embscope {

enum class Metric
{
  kCosine,
  kEuclidean,
};

std::string_view MetricName(Metric metric);
Metric ParseMetric(std::string_view name);

/// Dense row-major float32 matrix. This is the in-memory shape of both the
/// embedding vectors and the 2-column projections.
struct Matrix
{
  std::uint32_t      rows = 0;
  std::uint32_t      cols = 0;
  std::vector<float> values;

  Matrix() = default;
  Matrix(std::uint32_t r, std::uint32_t c)
    : rows(r)
    , cols(c)
    , values(static_cast<std::size_t>(r) * c, 0.0f)
  {}

  std::span<float const> Row(std::size_t i) const
  {
    return {values.data() + i * cols, cols};
  }

  std::span<float> Row(std::size_t i)
  {
    return {values.data() + i * cols, cols};
  }

  float &At(std::size_t i, std::size_t j)
  {
    return values[i * cols + j];
  }

  float At(std::size_t i, std::size_t j) const
  {
    return values[i * cols + j];
  }

  bool operator==(Matrix const &) const = default;
};

struct PointRecord
{
  PointId                    id = 0;
  std::optional<std::string> label;
  std::optional<std::string> text;
  std::optional<std::string> thumbnail;
  std::optional<int>         category;
};

struct EmbeddingFrame
{
  FrameId               frame_id = 0;
  std::string           name;
  Matrix                vectors;
  Metric                metric = Metric::kCosine;
  std::optional<Matrix> projection;
};

inline constexpr std::uint32_t kDefaultK = 100;

struct Dataset
{
  std::string                 name;
  std::vector<PointRecord>    points;
  std::vector<EmbeddingFrame> frames;
  std::uint32_t               k = kDefaultK;

  std::uint32_t size() const
  {
    return static_cast<std::uint32_t>(points.size());
  }

  std::uint32_t frame_count() const
  {
    return static_cast<std::uint32_t>(frames.size());
  }
};

enum class ViolationKind
{
  kNoFrames,
  kNoPoints,
  kPointIdOrder,
  kRowCountMismatch,
  kProjectionShape,
  kNonFinite,
  kZeroVectorCosine,
  kKOutOfRange,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation
{
  ViolationKind              kind;
  std::optional<FrameId>     frame;
  std::optional<std::size_t> row;
  std::string                message;
};

/// Every invariant violation in `d`, in a stable order. Empty means valid.
std::vector<Violation> ValidateDataset(Dataset const &d);

/// Reads manifest.json plus the files it references (paths are relative to the
/// manifest's directory) and validates the result. Throws on the first
/// violation.
Dataset LoadDataset(std::filesystem::path const &manifest_path);

/// Writes a dataset back out as manifest.json + points.json + EMBF matrices.
void SaveDataset(Dataset const &d, std::filesystem::path const &directory);

// Distances are accumulated in double over float32 inputs. Every caller that
// needs bit-identical distances (k-NN, radius select, tests) goes through these.
double Dot(std::span<float const> u, std::span<float const> v);
double Norm(std::span<float const> u);
double EuclideanDistance(std::span<float const> u, std::span<float const> v);
double CosineDistance(double dot, double norm_u, double norm_v);

double PairwiseDistance(Metric metric, std::span<float const> u, std::span<float const> v);

}  // namespace embscope
