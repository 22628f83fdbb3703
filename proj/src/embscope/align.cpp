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

#include "embscope/align.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "embscope/selection.hpp"

namespace embscope {

Coords ApplyTransform(Transform2D const &t, std::span<Point2 const> points)
{
  Coords out;
  out.reserve(points.size());
  for (auto const &p : points)
  {
    out.push_back(t.Apply(p));
  }
  return out;
}

double ProcrustesResidual(Transform2D const &t, std::span<Point2 const> source,
                          std::span<Point2 const> target, std::span<double const> weights)
{
  Require(source.size() == target.size(), "point count mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i)
  {
    auto const   p  = t.Apply(source[i]);
    double const dx = p[0] - target[i][0];
    double const dy = p[1] - target[i][1];
    total += (weights.empty() ? 1.0 : weights[i]) * (dx * dx + dy * dy);
  }
  return total;
}

Transform2D Procrustes(std::span<Point2 const> source, std::span<Point2 const> target,
                       std::span<double const> weights)
{
  Require(source.size() == target.size(), "point count mismatch");
  Require(weights.empty() || weights.size() == source.size(), "weight count mismatch");
  Require(source.size() >= 2, "procrustes needs at least 2 points");
  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double total = 0.0;
  Point2 mu_s{0.0, 0.0};
  Point2 mu_t{0.0, 0.0};
  for (std::size_t i = 0; i < source.size(); ++i)
  {
    double const w = weight(i);
    Require(w >= 0.0 && std::isfinite(w), "weights must be non-negative");
    total += w;
    mu_s[0] += w * source[i][0];
    mu_s[1] += w * source[i][1];
    mu_t[0] += w * target[i][0];
    mu_t[1] += w * target[i][1];
  }
  if (total <= 0.0)
  {
    Fail(ErrorKind::kDegenerate, "procrustes total weight is zero");
  }
  for (int c = 0; c < 2; ++c)
  {
    mu_s[c] /= total;
    mu_t[c] /= total;
  }

  // In 2D the cross-covariance polar factor restricted to det = +1 reduces to
  // the angle atan2(sum of cross terms, sum of dot terms).
  double spread = 0.0;
  double dot    = 0.0;
  double cross  = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i)
  {
    double const w  = weight(i);
    double const sx = source[i][0] - mu_s[0];
    double const sy = source[i][1] - mu_s[1];
    double const tx = target[i][0] - mu_t[0];
    double const ty = target[i][1] - mu_t[1];
    spread += w * (sx * sx + sy * sy);
    dot += w * (sx * tx + sy * ty);
    cross += w * (sx * ty - sy * tx);
  }
  if (spread <= 0.0)
  {
    Fail(ErrorKind::kDegenerate, "procrustes source points are coincident");
  }
  double const norm = std::hypot(dot, cross);
  if (norm <= 0.0)
  {
    Fail(ErrorKind::kDegenerate, "procrustes target carries no rotational signal");
  }

  Transform2D t;
  double const c = dot / norm;
  double const s = cross / norm;
  t.rotation     = {{{c, -s}, {s, c}}};
  t.scale        = norm / spread;
  t.translation  = {mu_t[0] - t.scale * (c * mu_s[0] - s * mu_s[1]),
                    mu_t[1] - t.scale * (s * mu_s[0] + c * mu_s[1])};
  return t;
}

AlignedProjections AlignFrames(std::span<Coords const> projections, FrameId reference,
                               std::optional<std::span<PointId const>> anchor)
{
  Require(reference < projections.size(), "reference frame out of range");
  std::size_t const n = projections[reference].size();

  AlignedProjections out;
  out.reference = reference;
  std::vector<PointId> members;
  if (anchor)
  {
    members = CheckedSortedSelection(*anchor, static_cast<std::uint32_t>(n), true);
    if (members.size() < 2)
    {
      Fail(ErrorKind::kInvalidArgument, "alignment anchor needs at least 2 points");
    }
    out.anchor = std::vector<PointId>(anchor->begin(), anchor->end());
  }

  Coords target;
  if (anchor)
  {
    for (PointId id : members)
    {
      target.push_back(projections[reference][id]);
    }
  }

  for (std::size_t f = 0; f < projections.size(); ++f)
  {
    Require(projections[f].size() == n, "projection sizes differ across frames");
    if (f == reference)
    {
      out.transforms.push_back(Transform2D::Identity());
      continue;
    }
    if (anchor)
    {
      Coords source;
      for (PointId id : members)
      {
        source.push_back(projections[f][id]);
      }
      out.transforms.push_back(Procrustes(source, target));
    }
    else
    {
      out.transforms.push_back(Procrustes(projections[f], projections[reference]));
    }
  }
  return out;
}

Coords PcaProject(EmbeddingFrame const &frame)
{
  auto const &m = frame.vectors;
  Require(m.rows >= 2, "PCA needs at least 2 points");

  Eigen::MatrixXd x(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
  {
    for (std::size_t j = 0; j < m.cols; ++j)
    {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.At(i, j);
    }
  }
  x.rowwise() -= x.colwise().mean();
  Eigen::MatrixXd const cov = (x.transpose() * x) / static_cast<double>(m.rows - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
  {
    Fail(ErrorKind::kDegenerate, "PCA eigen decomposition failed");
  }
  // Eigenvalues come back ascending.
  Eigen::VectorXd const &values  = solver.eigenvalues();
  Eigen::Index const     d       = values.size();
  if (values(d - 1) <= 0.0)
  {
    Fail(ErrorKind::kDegenerate, "PCA input has rank 0");
  }

  Eigen::MatrixXd axes = Eigen::MatrixXd::Zero(m.cols, 2);
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(2, d); ++c)
  {
    Eigen::VectorXd axis = solver.eigenvectors().col(d - 1 - c);
    Eigen::Index    largest;
    axis.cwiseAbs().maxCoeff(&largest);
    if (axis(largest) < 0.0)
    {
      axis = -axis;
    }
    axes.col(c) = axis;
  }

  Eigen::MatrixXd const scores = x * axes;
  Coords                out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
  {
    out[i] = {scores(static_cast<Eigen::Index>(i), 0), scores(static_cast<Eigen::Index>(i), 1)};
  }
  return out;
}

std::vector<FrameProjection> ResolveProjections(Dataset const &d)
{
  std::vector<FrameProjection> out;
  out.reserve(d.frames.size());
  for (auto const &f : d.frames)
  {
    FrameProjection p;
    if (f.projection)
    {
      p.coords.resize(f.projection->rows);
      for (std::size_t i = 0; i < f.projection->rows; ++i)
      {
        p.coords[i] = {f.projection->At(i, 0), f.projection->At(i, 1)};
      }
    }
    else
    {
      p.coords   = PcaProject(f);
      p.fallback = true;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PointId> IsolateSet(std::span<PointId const> selection,
                                std::span<NeighborTable const> tables, std::uint32_t vicinity)
{
  Require(!tables.empty(), "no frames");
  auto out = CheckedSortedSelection(selection, tables.front().rows());
  std::vector<PointId> extra;
  for (auto const &t : tables)
  {
    std::uint32_t const take = std::min(vicinity, t.k());
    for (PointId x : out)
    {
      auto const row = t.Row(x);
      extra.insert(extra.end(), row.begin(), row.begin() + take);
    }
  }
  out.insert(out.end(), extra.begin(), extra.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<PointId> RadiusSelect(EmbeddingFrame const &frame, PointId center, double radius)
{
  auto const &m = frame.vectors;
  if (center >= m.rows)
  {
    Fail(ErrorKind::kInvalidArgument, "center id out of range");
  }
  Require(radius >= 0.0 && !std::isnan(radius), "radius must be non-negative");
  std::vector<PointId> out;
  auto const           c = m.Row(center);
  for (PointId y = 0; y < m.rows; ++y)
  {
    if (y == center || PairwiseDistance(frame.metric, c, m.Row(y)) <= radius)
    {
      out.push_back(y);
    }
  }
  return out;
}

double DefaultRadius(EmbeddingFrame const &frame, NeighborTable const &table, PointId center)
{
  if (center >= table.rows())
  {
    Fail(ErrorKind::kInvalidArgument, "center id out of range");
  }
  std::vector<double> distances;
  for (PointId y : table.Row(center))
  {
    distances.push_back(PairwiseDistance(frame.metric, frame.vectors.Row(center), frame.vectors.Row(y)));
  }
  std::sort(distances.begin(), distances.end());
  std::size_t const mid = distances.size() / 2;
  return distances.size() % 2 == 1 ? distances[mid] : 0.5 * (distances[mid - 1] + distances[mid]);
}

}  // namespace embscope
