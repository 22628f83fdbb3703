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

// embscope command-line entry point. Links only the C API.

#include <csignal>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "embscope/embscope.h"

namespace {

embscope_service *g_service = nullptr;

void LogLine(const char *line, void *)
{
  std::fprintf(stderr, "[embscope] %s\n", line);
}

int Report(embscope_status status)
{
  if (status != EMBSCOPE_OK)
  {
    std::fprintf(stderr, "error: %s\n", embscope_last_error());
    return static_cast<int>(status);
  }
  return 0;
}

void OnSignal(int)
{
  if (g_service)
  {
    embscope_service_stop(g_service);
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Embedding-space comparison engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", embscope_version());

  std::string data_dir;

  auto *serve = app.add_subcommand("serve", "Serve the HTTP API for a data directory");
  int         port = 8080;
  std::string host = "127.0.0.1";
  std::string static_dir;
  serve->add_option("--data", data_dir, "Data directory containing manifest.json")->required();
  serve->add_option("--port", port, "Port to listen on")->capture_default_str();
  serve->add_option("--host", host, "Interface to bind")->capture_default_str();
  serve->add_option("--static", static_dir, "Directory of UI assets mounted under /ui");

  auto       *precompute = app.add_subcommand("precompute", "Build neighbor caches and suggestion pools");
  std::string metric;
  std::uint32_t k       = 0;
  std::uint32_t sample  = 2000;
  unsigned      threads = 0;
  precompute->add_option("--data", data_dir, "Data directory containing manifest.json")->required();
  precompute->add_option("--k", k, "Neighbors per point (default: manifest k, else 100)");
  precompute->add_option("--metric", metric, "Override every frame's metric")
      ->check(CLI::IsMember({"cosine", "euclidean"}));
  precompute->add_option("--sample", sample, "Suggestion candidate sample size")->capture_default_str();
  precompute->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto *inspect = app.add_subcommand("inspect", "Print dataset shape and cache status");
  inspect->add_option("--data", data_dir, "Data directory containing manifest.json")->required();

  auto         *export_cmd = app.add_subcommand("export-suggestions", "Write one frame pair's suggestion pool");
  std::uint32_t frame_a    = 0;
  std::uint32_t frame_b    = 1;
  std::string   out_path;
  export_cmd->add_option("--data", data_dir, "Data directory containing manifest.json")->required();
  export_cmd->add_option("--frame-a", frame_a, "First frame")->required();
  export_cmd->add_option("--frame-b", frame_b, "Second frame")->required();
  export_cmd->add_option("--out", out_path, "Output JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*precompute)
  {
    embscope_precompute_options options{k, metric.empty() ? nullptr : metric.c_str(), sample, threads};
    embscope_engine *engine = nullptr;
    if (int rc = Report(embscope_engine_open(data_dir.c_str(), &options, LogLine, nullptr, &engine)))
    {
      return rc;
    }
    std::printf("precomputed %u frames, N=%u, k=%u\n", embscope_engine_frame_count(engine),
                embscope_engine_point_count(engine), embscope_engine_k(engine));
    embscope_engine_free(engine);
    return 0;
  }

  if (*inspect)
  {
    char *json = nullptr;
    if (int rc = Report(embscope_inspect(data_dir.c_str(), &json)))
    {
      return rc;
    }
    std::printf("%s\n", json);
    embscope_string_free(json);
    return 0;
  }

  if (*export_cmd)
  {
    embscope_engine *engine = nullptr;
    if (int rc = Report(embscope_engine_open(data_dir.c_str(), nullptr, LogLine, nullptr, &engine)))
    {
      return rc;
    }
    int const rc = Report(embscope_export_suggestions(engine, frame_a, frame_b, out_path.c_str()));
    embscope_engine_free(engine);
    return rc;
  }

  embscope_engine *engine = nullptr;
  if (int rc = Report(embscope_engine_open(data_dir.c_str(), nullptr, LogLine, nullptr, &engine)))
  {
    return rc;
  }
  if (int rc = Report(embscope_service_create(engine, &g_service)))
  {
    return rc;
  }
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::fprintf(stderr, "[embscope] serving on http://%s:%d\n", host.c_str(), port);
  int const rc = Report(embscope_service_serve(g_service, host.c_str(), port, static_dir.empty() ? nullptr : static_dir.c_str()));
  embscope_service_free(g_service);
  g_service = nullptr;
  return rc;
}
