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

#include "embscope/embscope.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "embscope/engine.hpp"
#include "embscope/service.hpp"

struct embscope_engine
{
  std::shared_ptr<embscope::Engine const> engine;
};

struct embscope_service
{
  std::unique_ptr<embscope::Service> service;
};

namespace {

thread_local std::string g_last_error;

embscope_status StatusFor(embscope::ErrorKind kind)
{
  using embscope::ErrorKind;
  switch (kind)
  {
  case ErrorKind::kInvalidArgument:
    return EMBSCOPE_ERR_INVALID_ARGUMENT;
  case ErrorKind::kNotFound:
    return EMBSCOPE_ERR_NOT_FOUND;
  case ErrorKind::kConflict:
    return EMBSCOPE_ERR_CONFLICT;
  case ErrorKind::kIo:
    return EMBSCOPE_ERR_IO;
  case ErrorKind::kFormat:
    return EMBSCOPE_ERR_FORMAT;
  case ErrorKind::kDegenerate:
    return EMBSCOPE_ERR_DEGENERATE;
  }
  return EMBSCOPE_ERR_INTERNAL;
}

// Runs body, translating exceptions into a status and the thread's last error.
template <typename Body>
embscope_status Guard(Body &&body)
{
  try
  {
    body();
    g_last_error.clear();
    return EMBSCOPE_OK;
  }
  catch (embscope::Error const &e)
  {
    g_last_error = e.what();
    return StatusFor(e.kind());
  }
  catch (std::exception const &e)
  {
    g_last_error = e.what();
    return EMBSCOPE_ERR_INTERNAL;
  }
  catch (...)
  {
    g_last_error = "unknown error";
    return EMBSCOPE_ERR_INTERNAL;
  }
}

char *CopyString(std::string const &s)
{
  auto *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr)
  {
    throw std::bad_alloc();
  }
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void RequireArg(bool ok, char const *what)
{
  if (!ok)
  {
    embscope::Fail(embscope::ErrorKind::kInvalidArgument, std::string(what) + " must not be null");
  }
}

}  // namespace

extern "C" {

const char *embscope_version(void)
{
  return "1.0.0";
}

const char *embscope_last_error(void)
{
  return g_last_error.c_str();
}

void embscope_string_free(char *s)
{
  std::free(s);
}

embscope_status embscope_engine_open(const char *data_dir, const embscope_precompute_options *options,
                                     embscope_log_fn log, void *log_user_data, embscope_engine **out)
{
  return Guard([&] {
    RequireArg(data_dir != nullptr, "data_dir");
    RequireArg(out != nullptr, "out");
    embscope::LogSink sink;
    if (log != nullptr)
    {
      sink = [log, log_user_data](std::string const &line) { log(line.c_str(), log_user_data); };
    }
    std::shared_ptr<embscope::Engine const> engine;
    if (options == nullptr)
    {
      engine = std::make_shared<embscope::Engine const>(embscope::Engine::OpenWithRecordedOptions(data_dir, nullptr, sink));
    }
    else
    {
      embscope::PrecomputeOptions opts;
      if (options->k != 0)
      {
        opts.k = options->k;
      }
      if (options->metric != nullptr)
      {
        opts.metric = embscope::ParseMetric(options->metric);
      }
      if (options->sample != 0)
      {
        opts.suggest.sample = options->sample;
      }
      opts.threads         = options->threads;
      opts.suggest.threads = options->threads;
      engine = std::make_shared<embscope::Engine const>(embscope::Engine::Open(data_dir, opts, nullptr, sink));
    }
    *out = new embscope_engine{std::move(engine)};
  });
}

void embscope_engine_free(embscope_engine *engine)
{
  delete engine;
}

uint32_t embscope_engine_point_count(const embscope_engine *engine)
{
  return engine ? engine->engine->dataset().size() : 0;
}

uint32_t embscope_engine_frame_count(const embscope_engine *engine)
{
  return engine ? engine->engine->dataset().frame_count() : 0;
}

uint32_t embscope_engine_k(const embscope_engine *engine)
{
  return engine ? engine->engine->dataset().k : 0;
}

embscope_status embscope_export_suggestions(const embscope_engine *engine, uint32_t frame_a, uint32_t frame_b,
                                            const char *out_path)
{
  return Guard([&] {
    RequireArg(engine != nullptr, "engine");
    RequireArg(out_path != nullptr, "out_path");
    embscope::ExportSuggestions(*engine->engine, frame_a, frame_b, out_path);
  });
}

embscope_status embscope_inspect(const char *data_dir, char **out_json)
{
  return Guard([&] {
    RequireArg(data_dir != nullptr, "data_dir");
    RequireArg(out_json != nullptr, "out_json");
    using nlohmann::json;
    std::filesystem::path const dir = data_dir;
    auto                        d   = embscope::LoadDataset(dir / "manifest.json");

    // Cache keys follow the last precompute run when there was one.
    auto const record_path = embscope::CacheDir(dir) / "precompute.json";
    json       record      = nullptr;
    if (std::filesystem::exists(record_path))
    {
      std::ifstream in(record_path);
      record = json::parse(in, nullptr, false);
      if (record.is_discarded())
      {
        record = nullptr;
      }
    }
    if (record.is_object())
    {
      d.k = record.value("k", d.k);
      if (record.contains("metric") && record["metric"].is_string())
      {
        for (auto &f : d.frames)
        {
          f.metric = embscope::ParseMetric(record["metric"].get<std::string>());
        }
      }
    }

    json frames = json::array();
    for (auto const &f : d.frames)
    {
      frames.push_back({{"id", f.frame_id},
                        {"name", f.name},
                        {"metric", embscope::MetricName(f.metric)},
                        {"D", f.vectors.cols},
                        {"projection", f.projection ? "ingested" : "absent (PCA fallback)"},
                        {"neighbor_cache", std::filesystem::exists(embscope::NeighborCachePath(embscope::CacheDir(dir), f, d.k))}});
    }
    json pools = json::array();
    for (std::uint32_t a = 0; a < d.frame_count(); ++a)
    {
      for (std::uint32_t b = a + 1; b < d.frame_count(); ++b)
      {
        pools.push_back({{"frames", {a, b}}, {"cached", std::filesystem::exists(embscope::PairPoolPath(dir, a, b))}});
      }
    }
    json report = {{"name", d.name},  {"N", d.size()},       {"F", d.frame_count()}, {"k", d.k},
                   {"frames", frames}, {"suggestion_pools", pools}, {"precompute_record", record}};
    *out_json = CopyString(report.dump(2));
  });
}

embscope_status embscope_service_create(embscope_engine *engine, embscope_service **out)
{
  return Guard([&] {
    RequireArg(engine != nullptr, "engine");
    RequireArg(out != nullptr, "out");
    auto service = std::make_unique<embscope::Service>(engine->engine);
    delete engine;
    *out = new embscope_service{std::move(service)};
  });
}

void embscope_service_free(embscope_service *service)
{
  delete service;
}

embscope_status embscope_service_request(embscope_service *service, const char *method, const char *target,
                                         const char *body, int *http_status, char **out_body)
{
  return Guard([&] {
    RequireArg(service != nullptr, "service");
    RequireArg(method != nullptr && target != nullptr, "method/target");
    RequireArg(http_status != nullptr && out_body != nullptr, "outputs");
    auto const response =
        service->service->Handle(embscope::HttpRequest::FromTarget(method, target, body ? body : ""));
    *http_status = response.status;
    *out_body    = CopyString(response.body);
  });
}

embscope_status embscope_service_serve(embscope_service *service, const char *host, int port, const char *static_dir)
{
  return Guard([&] {
    RequireArg(service != nullptr, "service");
    service->service->Serve(host ? host : "127.0.0.1", port, static_dir ? static_dir : "");
  });
}

void embscope_service_stop(embscope_service *service)
{
  if (service)
  {
    service->service->Stop();
  }
}

}  // extern "C"
