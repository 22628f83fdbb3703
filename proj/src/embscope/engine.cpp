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

#include "embscope/engine.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "embscope/matrix_io.hpp"

namespace embscope {

using nlohmann::json;

namespace {

constexpr char const *kRecordFile = "precompute.json";

std::string ReadText(std::filesystem::path const &path)
{
  std::ifstream      in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteText(std::filesystem::path const &path, std::string const &text)
{
  WriteFileBytes(path, std::span(reinterpret_cast<std::uint8_t const *>(text.data()), text.size()));
}

std::string Hex(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Key for one pair pool: suggestion config plus the inputs of both tables.
std::string PairKey(SuggestConfig const &config, EmbeddingFrame const &a, EmbeddingFrame const &b,
                    std::uint32_t k)
{
  return config.Hash() + "-k" + std::to_string(k) + "-" + Hex(FrameContentHash(a)) + std::string(MetricName(a.metric)) +
         "-" + Hex(FrameContentHash(b)) + std::string(MetricName(b.metric));
}

}  // namespace

std::filesystem::path CacheDir(std::filesystem::path const &data_dir)
{
  return data_dir / "cache";
}

std::filesystem::path PairPoolPath(std::filesystem::path const &data_dir, FrameId a, FrameId b)
{
  return CacheDir(data_dir) / ("suggestions_" + std::to_string(a) + "_" + std::to_string(b) + ".json");
}

Engine Engine::Open(std::filesystem::path const &data_dir, PrecomputeOptions const &options,
                    PrecomputeReport *report, LogSink const &log)
{
  auto say = [&](std::string const &line) {
    if (log)
    {
      log(line);
    }
  };

  Engine e;
  e.data_dir_ = data_dir;
  e.dataset_  = LoadDataset(data_dir / "manifest.json");
  if (options.k)
  {
    e.dataset_.k = *options.k;
  }
  if (options.metric)
  {
    for (auto &f : e.dataset_.frames)
    {
      f.metric = *options.metric;
    }
  }
  if (options.k || options.metric)
  {
    auto violations = ValidateDataset(e.dataset_);
    if (!violations.empty())
    {
      Fail(ErrorKind::kInvalidArgument, violations.front().message);
    }
  }

  auto const     cache = CacheDir(data_dir);
  auto const     k     = e.dataset_.k;
  PrecomputeReport local;
  for (auto const &frame : e.dataset_.frames)
  {
    bool hit = false;
    e.tables_.push_back(LoadOrComputeNeighbors(cache, frame, k, &hit, options.threads));
    local.neighbor_cache_hit.push_back(hit);
    say(std::string(hit ? "cache hit" : "computed") + ": neighbors for frame " + std::to_string(frame.frame_id) +
        " (k=" + std::to_string(k) + ", " + std::string(MetricName(frame.metric)) + ")");
  }

  e.projections_ = ResolveProjections(e.dataset_);
  for (std::size_t f = 0; f < e.projections_.size(); ++f)
  {
    if (e.projections_[f].fallback)
    {
      say("frame " + std::to_string(f) + " has no projection; using PCA fallback");
    }
    e.coords_.push_back(e.projections_[f].coords);
  }

  for (FrameId a = 0; a < e.dataset_.frame_count(); ++a)
  {
    for (FrameId b = a + 1; b < e.dataset_.frame_count(); ++b)
    {
      auto const path = PairPoolPath(data_dir, a, b);
      auto const key  = PairKey(options.suggest, e.dataset_.frames[a], e.dataset_.frames[b], k);
      std::vector<SuggestionCluster> clusters;
      bool                           hit = false;
      if (std::filesystem::exists(path))
      {
        std::string stored;
        auto        loaded = DeserializePairPool(ReadText(path), &stored);
        if (stored == key)
        {
          clusters = std::move(loaded);
          hit      = true;
        }
      }
      if (!hit)
      {
        clusters = BuildPairSuggestions(e.tables_[a], e.tables_[b], options.suggest);
        WriteText(path, SerializePairPool(clusters, a, b, key));
      }
      local.pool_cache_hit.push_back(hit);
      say(std::string(hit ? "cache hit" : "computed") + ": suggestions for frames " + std::to_string(a) + "," +
          std::to_string(b) + " (" + std::to_string(clusters.size() / 2) + " clusters)");
      std::move(clusters.begin(), clusters.end(), std::back_inserter(e.pool_.clusters));
    }
  }

  e.config_hash_ = options.suggest.Hash() + "-k" + std::to_string(k);
  local.config_hash = e.config_hash_;

  json record = {{"k", k},
                 {"metric", options.metric ? json(MetricName(*options.metric)) : json(nullptr)},
                 {"sample", options.suggest.sample},
                 {"config_hash", e.config_hash_}};
  WriteText(cache / kRecordFile, record.dump(2));

  if (report)
  {
    *report = std::move(local);
  }
  return e;
}

Engine Engine::OpenWithRecordedOptions(std::filesystem::path const &data_dir, PrecomputeReport *report,
                                       LogSink const &log)
{
  PrecomputeOptions options;
  auto const        record_path = CacheDir(data_dir) / kRecordFile;
  if (std::filesystem::exists(record_path))
  {
    try
    {
      json const record = json::parse(ReadText(record_path));
      options.k         = record.at("k").get<std::uint32_t>();
      if (!record.at("metric").is_null())
      {
        options.metric = ParseMetric(record.at("metric").get<std::string>());
      }
      options.suggest.sample = record.at("sample").get<std::uint32_t>();
    }
    catch (json::exception const &)
    {
      if (log)
      {
        log("ignoring unreadable " + record_path.string());
      }
    }
  }
  else if (log)
  {
    log("no precompute record found; precomputing with defaults");
  }
  return Open(data_dir, options, report, log);
}

NeighborTable const &Engine::table(FrameId f) const
{
  if (f >= tables_.size())
  {
    Fail(ErrorKind::kInvalidArgument, "frame " + std::to_string(f) + " out of range");
  }
  return tables_[f];
}

EmbeddingFrame const &Engine::frame(FrameId f) const
{
  if (f >= dataset_.frames.size())
  {
    Fail(ErrorKind::kInvalidArgument, "frame " + std::to_string(f) + " out of range");
  }
  return dataset_.frames[f];
}

void ExportSuggestions(Engine const &engine, FrameId a, FrameId b, std::filesystem::path const &out)
{
  engine.frame(a);
  engine.frame(b);
  Require(a != b, "export needs two distinct frames");
  std::vector<SuggestionCluster> clusters;
  for (auto const &c : engine.pool().clusters)
  {
    if ((c.frame_a == a && c.frame_b == b) || (c.frame_a == b && c.frame_b == a))
    {
      clusters.push_back(c);
    }
  }
  WriteText(out, SerializePairPool(clusters, std::min(a, b), std::max(a, b), engine.config_hash()));
}

}  // namespace embscope
