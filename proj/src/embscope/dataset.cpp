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

#include "embscope/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "embscope/matrix_io.hpp"

namespace embscope {

using nlohmann::json;

std::string_view MetricName(Metric metric)
{
  return metric == Metric::kCosine ? "cosine" : "euclidean";
}

Metric ParseMetric(std::string_view name)
{
  if (name == "cosine")
  {
    return Metric::kCosine;
  }
  if (name == "euclidean")
  {
    return Metric::kEuclidean;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::string_view ViolationKindName(ViolationKind kind)
{
  switch (kind)
  {
  case ViolationKind::kNoFrames:
    return "no-frames";
  case ViolationKind::kNoPoints:
    return "no-points";
  case ViolationKind::kPointIdOrder:
    return "point-id-order";
  case ViolationKind::kRowCountMismatch:
    return "row-count-mismatch";
  case ViolationKind::kProjectionShape:
    return "projection-shape";
  case ViolationKind::kNonFinite:
    return "non-finite";
  case ViolationKind::kZeroVectorCosine:
    return "zero-vector-cosine";
  case ViolationKind::kKOutOfRange:
    return "k-out-of-range";
  }
  return "unknown";
}

double Dot(std::span<float const> u, std::span<float const> v)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  }
  return acc;
}

double Norm(std::span<float const> u)
{
  return std::sqrt(Dot(u, u));
}

double EuclideanDistance(std::span<float const> u, std::span<float const> v)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    double const d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

double CosineDistance(double dot, double norm_u, double norm_v)
{
  return std::clamp(1.0 - dot / (norm_u * norm_v), 0.0, 2.0);
}

double PairwiseDistance(Metric metric, std::span<float const> u, std::span<float const> v)
{
  Require(u.size() == v.size(), "vector length mismatch");
  if (metric == Metric::kEuclidean)
  {
    return EuclideanDistance(u, v);
  }
  double const nu = Norm(u);
  double const nv = Norm(v);
  if (nu == 0.0 || nv == 0.0)
  {
    Fail(ErrorKind::kInvalidArgument, "cosine distance of a zero-norm vector");
  }
  return CosineDistance(Dot(u, v), nu, nv);
}

namespace {

bool RowFinite(std::span<float const> row)
{
  return std::all_of(row.begin(), row.end(), [](float f) { return std::isfinite(f); });
}

void CheckMatrixValues(Matrix const &m, FrameId frame, char const *what, bool cosine,
                       std::vector<Violation> &out)
{
  for (std::size_t r = 0; r < m.rows; ++r)
  {
    auto row = m.Row(r);
    if (!RowFinite(row))
    {
      out.push_back({ViolationKind::kNonFinite, frame, r,
                     std::string("non-finite value in ") + what + " of frame " +
                         std::to_string(frame) + ", row " + std::to_string(r)});
    }
    else if (cosine && Norm(row) == 0.0)
    {
      out.push_back({ViolationKind::kZeroVectorCosine, frame, r,
                     "all-zero vector under cosine metric in frame " + std::to_string(frame) +
                         ", row " + std::to_string(r)});
    }
  }
}

}  // namespace

std::vector<Violation> ValidateDataset(Dataset const &d)
{
  std::vector<Violation> out;
  std::size_t const      n = d.points.size();
  if (d.frames.empty())
  {
    out.push_back({ViolationKind::kNoFrames, {}, {}, "dataset has no frames"});
  }
  if (n == 0)
  {
    out.push_back({ViolationKind::kNoPoints, {}, {}, "dataset has no points"});
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    if (d.points[i].id != i)
    {
      out.push_back({ViolationKind::kPointIdOrder, {}, i,
                     "point ids must be 0..N-1 in order (row " + std::to_string(i) + ")"});
      break;
    }
  }
  for (auto const &f : d.frames)
  {
    if (f.vectors.rows != n || f.vectors.cols == 0)
    {
      out.push_back({ViolationKind::kRowCountMismatch, f.frame_id, {},
                     "frame row count mismatch in frame " + std::to_string(f.frame_id) + " (" +
                         std::to_string(f.vectors.rows) + "x" + std::to_string(f.vectors.cols) +
                         ", expected " + std::to_string(n) + " rows)"});
    }
    else
    {
      CheckMatrixValues(f.vectors, f.frame_id, "vectors", f.metric == Metric::kCosine, out);
    }
    if (f.projection)
    {
      if (f.projection->rows != n || f.projection->cols != 2)
      {
        out.push_back({ViolationKind::kProjectionShape, f.frame_id, {},
                       "projection of frame " + std::to_string(f.frame_id) + " must be " +
                           std::to_string(n) + "x2"});
      }
      else
      {
        CheckMatrixValues(*f.projection, f.frame_id, "projection", false, out);
      }
    }
  }
  if (d.k < 1)
  {
    out.push_back({ViolationKind::kKOutOfRange, {}, {}, "k must be >= 1"});
  }
  else if (d.k >= n)
  {
    out.push_back({ViolationKind::kKOutOfRange, {}, {}, "k must be < N"});
  }
  return out;
}

namespace {

json ReadJsonFile(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    Fail(ErrorKind::kIo, "cannot open " + path.string());
  }
  try
  {
    return json::parse(in);
  }
  catch (json::exception const &e)
  {
    Fail(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
}

template <typename T>
std::optional<T> OptionalField(json const &j, char const *key)
{
  auto it = j.find(key);
  if (it == j.end() || it->is_null())
  {
    return std::nullopt;
  }
  return it->get<T>();
}

}  // namespace

Dataset LoadDataset(std::filesystem::path const &manifest_path)
{
  if (!std::filesystem::exists(manifest_path))
  {
    Fail(ErrorKind::kIo, "manifest not found: " + manifest_path.string());
  }
  auto const base     = manifest_path.parent_path();
  json const manifest = ReadJsonFile(manifest_path);

  Dataset d;
  try
  {
    d.name = manifest.value("name", std::string{});
    d.k    = manifest.value("k", kDefaultK);

    json const points = ReadJsonFile(base / manifest.at("points").get<std::string>());
    Require(points.is_array(), "points.json must be an array");
    d.points.reserve(points.size());
    for (auto const &p : points)
    {
      PointRecord rec;
      rec.id        = p.at("id").get<PointId>();
      rec.label     = OptionalField<std::string>(p, "label");
      rec.text      = OptionalField<std::string>(p, "text");
      rec.thumbnail = OptionalField<std::string>(p, "thumbnail");
      rec.category  = OptionalField<int>(p, "category");
      d.points.push_back(std::move(rec));
    }

    auto const &frames = manifest.at("frames");
    Require(frames.is_array(), "manifest 'frames' must be an array");
    for (std::size_t i = 0; i < frames.size(); ++i)
    {
      auto const    &f = frames[i];
      EmbeddingFrame frame;
      frame.frame_id = static_cast<FrameId>(i);
      frame.name     = f.value("name", "frame " + std::to_string(i));
      frame.metric   = ParseMetric(f.value("metric", std::string("cosine")));
      frame.vectors  = ReadMatrix(base / f.at("vectors").get<std::string>());
      if (auto proj = OptionalField<std::string>(f, "projection"))
      {
        frame.projection = ReadMatrix(base / *proj);
      }
      d.frames.push_back(std::move(frame));
    }
  }
  catch (json::exception const &e)
  {
    Fail(ErrorKind::kFormat, manifest_path.string() + ": " + e.what());
  }

  auto violations = ValidateDataset(d);
  if (!violations.empty())
  {
    Fail(ErrorKind::kInvalidArgument, violations.front().message);
  }
  return d;
}

void SaveDataset(Dataset const &d, std::filesystem::path const &directory)
{
  std::filesystem::create_directories(directory);
  json points = json::array();
  for (auto const &p : d.points)
  {
    json rec = {{"id", p.id}};
    if (p.label)
    {
      rec["label"] = *p.label;
    }
    if (p.text)
    {
      rec["text"] = *p.text;
    }
    if (p.thumbnail)
    {
      rec["thumbnail"] = *p.thumbnail;
    }
    if (p.category)
    {
      rec["category"] = *p.category;
    }
    points.push_back(std::move(rec));
  }
  std::ofstream(directory / "points.json") << points.dump();

  json frames = json::array();
  for (std::size_t i = 0; i < d.frames.size(); ++i)
  {
    auto const &f       = d.frames[i];
    std::string vectors = "frame" + std::to_string(i) + ".embf";
    WriteMatrix(directory / vectors, f.vectors);
    json entry = {{"name", f.name}, {"metric", MetricName(f.metric)}, {"vectors", vectors},
                  {"projection", nullptr}};
    if (f.projection)
    {
      std::string proj = "frame" + std::to_string(i) + ".proj.embf";
      WriteMatrix(directory / proj, *f.projection);
      entry["projection"] = proj;
    }
    frames.push_back(std::move(entry));
  }
  json manifest = {{"name", d.name}, {"k", d.k}, {"points", "points.json"}, {"frames", frames}};
  std::ofstream(directory / "manifest.json") << manifest.dump(2);
}

}  // namespace embscope
