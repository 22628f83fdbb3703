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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "embscope/engine.hpp"

namespace embscope {

struct HttpRequest
{
  std::string                        method;
  std::string                        path;
  std::map<std::string, std::string> query;
  std::string                        body;

  /// Splits "path?a=1&b=2" (percent-decoded) into path and query.
  static HttpRequest FromTarget(std::string method, std::string const &target, std::string body = {});
};

struct HttpResponse
{
  int                                status = 200;
  std::string                        body;
  std::map<std::string, std::string> headers;
};

struct SavedSelection
{
  std::string                name;
  std::vector<PointId>       ids;
  std::string                created_at;
  std::optional<std::string> notes;
};

/// File-backed store: {"selections": [SavedSelection...]}, one file per dataset.
class SelectionStore
{
public:
  explicit SelectionStore(std::filesystem::path file);

  std::vector<SavedSelection> List() const;
  SavedSelection              Get(std::string const &name) const;
  SavedSelection              Add(SavedSelection selection);  // throws kConflict on duplicate name
  void                        Remove(std::string const &name);

private:
  void Persist() const;

  std::filesystem::path       file_;
  std::vector<SavedSelection> items_;
};

/// Validates a session state document (frame, comparison frame, selection,
/// viewport, anchor, isolate, filter, t). Throws kInvalidArgument.
void ValidateSessionState(nlohmann::ordered_json const &state, Engine const &engine);

/// Thin JSON adapter over the engine. All analytics are delegated to the
/// engine modules; the only mutable state is the session state document and
/// the saved-selection store, both guarded by a single-writer lock.
class Service
{
public:
  explicit Service(std::shared_ptr<Engine const> engine);

  HttpResponse Handle(HttpRequest const &request);

  /// Blocks serving HTTP on host:port until Stop(). Throws kIo when the port
  /// cannot be bound.
  void Serve(std::string const &host, int port, std::filesystem::path const &static_dir = {});
  void Stop();

  Engine const &engine() const
  {
    return *engine_;
  }

private:
  struct Impl;
  std::shared_ptr<Engine const> engine_;
  std::shared_ptr<Impl>         impl_;
};

}  // namespace embscope
