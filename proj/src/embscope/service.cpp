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

#include "embscope/service.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "embscope/compare.hpp"
#include "embscope/matrix_io.hpp"
#include "embscope/stripes.hpp"

namespace embscope {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string PercentDecode(std::string_view s)
{
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    if (s[i] == '%' && i + 2 < s.size())
    {
      int value = 0;
      auto [ptr, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, value, 16);
      if (ec == std::errc() && ptr == s.data() + i + 3)
      {
        out.push_back(static_cast<char>(value));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i] == '+' ? ' ' : s[i]);
  }
  return out;
}

std::vector<std::string> SplitPath(std::string const &path)
{
  std::vector<std::string> parts;
  std::stringstream        in(path);
  std::string              part;
  while (std::getline(in, part, '/'))
  {
    if (!part.empty())
    {
      parts.push_back(part);
    }
  }
  return parts;
}

std::uint64_t ParseUnsigned(std::string_view text, char const *what)
{
  std::uint64_t value = 0;
  auto [ptr, ec]      = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
  {
    Fail(ErrorKind::kInvalidArgument, std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<PointId> ParseIdList(std::string const &text)
{
  std::vector<PointId> ids;
  std::stringstream    in(text);
  std::string          item;
  while (std::getline(in, item, ','))
  {
    if (!item.empty())
    {
      ids.push_back(static_cast<PointId>(ParseUnsigned(item, "point id")));
    }
  }
  return ids;
}

template <typename Json>
std::vector<PointId> IdArray(Json const &j, char const *key)
{
  if (!j.is_array())
  {
    Fail(ErrorKind::kInvalidArgument, std::string("'") + key + "' must be an array of point ids");
  }
  std::vector<PointId> ids;
  for (auto const &v : j)
  {
    if (!v.is_number_integer() || v.template get<std::int64_t>() < 0)
    {
      Fail(ErrorKind::kInvalidArgument, std::string("'") + key + "' must contain non-negative integers");
    }
    ids.push_back(v.template get<PointId>());
  }
  return ids;
}

template <typename Json>
std::vector<PointId> IdsField(Json const &body, char const *key, bool required)
{
  auto it = body.find(key);
  if (it == body.end() || it->is_null())
  {
    if (required)
    {
      Fail(ErrorKind::kInvalidArgument, std::string("missing '") + key + "'");
    }
    return {};
  }
  return IdArray(*it, key);
}

template <typename Json>
FrameId FrameValue(Json const &j, char const *key, Engine const &engine)
{
  if (!j.is_number_integer() || j.template get<std::int64_t>() < 0 ||
      j.template get<std::int64_t>() >= engine.dataset().frame_count())
  {
    Fail(ErrorKind::kInvalidArgument, std::string("'") + key + "' is not a valid frame id");
  }
  return j.template get<FrameId>();
}

template <typename Json>
FrameId FrameField(Json const &body, char const *key, Engine const &engine)
{
  auto it = body.find(key);
  if (it == body.end())
  {
    Fail(ErrorKind::kInvalidArgument, std::string("missing '") + key + "'");
  }
  return FrameValue(*it, key, engine);
}

std::uint32_t TopField(json const &body, char const *key, std::uint32_t fallback)
{
  auto it = body.find(key);
  if (it == body.end() || it->is_null())
  {
    return fallback;
  }
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
  {
    Fail(ErrorKind::kInvalidArgument, std::string("'") + key + "' must be a non-negative integer");
  }
  return it->get<std::uint32_t>();
}

json ParseBody(std::string const &body)
{
  if (body.empty())
  {
    return json::object();
  }
  try
  {
    json j = json::parse(body);
    if (!j.is_object())
    {
      Fail(ErrorKind::kInvalidArgument, "request body must be a JSON object");
    }
    return j;
  }
  catch (json::parse_error const &e)
  {
    Fail(ErrorKind::kInvalidArgument, std::string("invalid JSON: ") + e.what());
  }
}

std::string NowIso8601()
{
  auto const  now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm     utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

json TransformJson(Transform2D const &t)
{
  return {{"rotation", {{t.rotation[0][0], t.rotation[0][1]}, {t.rotation[1][0], t.rotation[1][1]}}},
          {"scale", t.scale},
          {"translation", {t.translation[0], t.translation[1]}}};
}

json StripeJson(ColorStripe const &s)
{
  json colors = json::array();
  for (std::size_t f = 0; f < s.colors.size(); ++f)
  {
    auto const &c = s.colors[f];
    colors.push_back({{"frame", f},
                      {"lab", {c.lab.l, c.lab.a, c.lab.b}},
                      {"srgb", RgbToHex(c.srgb)},
                      {"hue", c.hue_degrees}});
  }
  return {{"colors", colors},
          {"ring_order", s.ring_order},
          {"max_distance", s.max_distance},
          {"baseline", s.baseline},
          {"chroma", s.chroma}};
}

json NeighborListJson(std::vector<SelectionNeighbor> const &list)
{
  json out = json::array();
  for (auto const &n : list)
  {
    out.push_back({{"id", n.id}, {"score", static_cast<double>(n.score)}, {"support", static_cast<double>(n.support)}});
  }
  return out;
}

json DiffJson(std::vector<DiffEntry> const &list)
{
  json out = json::array();
  for (auto const &e : list)
  {
    out.push_back({{"id", e.neighbor.id},
                   {"score", static_cast<double>(e.neighbor.score)},
                   {"support", static_cast<double>(e.neighbor.support)},
                   {"flag", DiffFlagName(e.flag)}});
  }
  return out;
}

json ScoredJson(std::vector<ScoredPoint> const &list)
{
  json out = json::array();
  for (auto const &p : list)
  {
    out.push_back({{"id", p.id}, {"value", static_cast<double>(p.value)}});
  }
  return out;
}

json SelectionJson(SavedSelection const &s)
{
  json j = {{"name", s.name}, {"ids", s.ids}, {"created_at", s.created_at}, {"notes", nullptr}};
  if (s.notes)
  {
    j["notes"] = *s.notes;
  }
  return j;
}

ordered_json InitialState()
{
  return ordered_json{{"current_frame", 0},   {"comparison_frame", nullptr}, {"selection", json::array()},
                      {"viewport", nullptr},   {"anchor", nullptr},           {"isolate", false},
                      {"filter", nullptr},     {"t", 0.0}};
}

int StatusFor(ErrorKind kind)
{
  switch (kind)
  {
  case ErrorKind::kNotFound:
    return 404;
  case ErrorKind::kConflict:
    return 409;
  case ErrorKind::kIo:
    return 500;
  default:
    return 400;
  }
}

HttpResponse JsonResponse(int status, json const &body)
{
  return {status, body.dump(), {{"Content-Type", "application/json"}}};
}

HttpResponse ErrorResponse(int status, std::string const &error, std::string const &detail)
{
  return JsonResponse(status, {{"error", error}, {"detail", detail}});
}

}  // namespace

HttpRequest HttpRequest::FromTarget(std::string method, std::string const &target, std::string body)
{
  HttpRequest r;
  r.method = std::move(method);
  r.body   = std::move(body);
  auto const q = target.find('?');
  r.path       = PercentDecode(target.substr(0, q));
  if (q != std::string::npos)
  {
    std::stringstream in(target.substr(q + 1));
    std::string       pair;
    while (std::getline(in, pair, '&'))
    {
      auto const eq = pair.find('=');
      if (eq == std::string::npos)
      {
        r.query[PercentDecode(pair)] = "";
      }
      else
      {
        r.query[PercentDecode(pair.substr(0, eq))] = PercentDecode(pair.substr(eq + 1));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

SelectionStore::SelectionStore(std::filesystem::path file)
  : file_(std::move(file))
{
  if (!std::filesystem::exists(file_))
  {
    return;
  }
  try
  {
    std::ifstream in(file_);
    json const    doc = json::parse(in);
    for (auto const &s : doc.at("selections"))
    {
      SavedSelection sel;
      sel.name       = s.at("name").get<std::string>();
      sel.ids        = s.at("ids").get<std::vector<PointId>>();
      sel.created_at = s.value("created_at", std::string{});
      if (s.contains("notes") && !s.at("notes").is_null())
      {
        sel.notes = s.at("notes").get<std::string>();
      }
      items_.push_back(std::move(sel));
    }
  }
  catch (json::exception const &e)
  {
    Fail(ErrorKind::kFormat, file_.string() + ": " + e.what());
  }
}

std::vector<SavedSelection> SelectionStore::List() const
{
  return items_;
}

SavedSelection SelectionStore::Get(std::string const &name) const
{
  auto it = std::find_if(items_.begin(), items_.end(), [&](auto const &s) { return s.name == name; });
  if (it == items_.end())
  {
    Fail(ErrorKind::kNotFound, "no saved selection named '" + name + "'");
  }
  return *it;
}

SavedSelection SelectionStore::Add(SavedSelection selection)
{
  Require(!selection.name.empty(), "selection name must not be empty");
  if (std::any_of(items_.begin(), items_.end(), [&](auto const &s) { return s.name == selection.name; }))
  {
    Fail(ErrorKind::kConflict, "a selection named '" + selection.name + "' already exists");
  }
  items_.push_back(selection);
  Persist();
  return selection;
}

void SelectionStore::Remove(std::string const &name)
{
  auto it = std::find_if(items_.begin(), items_.end(), [&](auto const &s) { return s.name == name; });
  if (it == items_.end())
  {
    Fail(ErrorKind::kNotFound, "no saved selection named '" + name + "'");
  }
  items_.erase(it);
  Persist();
}

void SelectionStore::Persist() const
{
  json list = json::array();
  for (auto const &s : items_)
  {
    list.push_back(SelectionJson(s));
  }
  std::string const text = json{{"selections", list}}.dump(2);
  WriteFileBytes(file_, std::span(reinterpret_cast<std::uint8_t const *>(text.data()), text.size()));
}

// ---------------------------------------------------------------------------

void ValidateSessionState(ordered_json const &state, Engine const &engine)
{
  Require(state.is_object(), "state must be a JSON object");
  std::uint32_t const n = engine.dataset().size();
  for (auto const &[key, value] : state.items())
  {
    if (key == "current_frame")
    {
      FrameValue(value, "current_frame", engine);
    }
    else if (key == "comparison_frame")
    {
      if (!value.is_null())
      {
        FrameValue(value, "comparison_frame", engine);
      }
    }
    else if (key == "selection" || key == "anchor" || key == "filter")
    {
      if (!value.is_null() || key == "selection")
      {
        CheckedSortedSelection(IdArray(value, key.c_str()), n, true);
      }
    }
    else if (key == "viewport")
    {
      if (value.is_null())
      {
        continue;
      }
      auto pair = [&](char const *corner) {
        auto it = value.find(corner);
        if (it == value.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        {
          Fail(ErrorKind::kInvalidArgument, std::string("viewport.") + corner + " must be [x, y]");
        }
        return std::array<double, 2>{(*it)[0].template get<double>(), (*it)[1].template get<double>()};
      };
      Require(value.is_object() && value.size() == 2, "viewport must be {\"min\": [x, y], \"max\": [x, y]}");
      auto const lo = pair("min");
      auto const hi = pair("max");
      Require(lo[0] < hi[0] && lo[1] < hi[1], "viewport min must be < max on both axes");
    }
    else if (key == "isolate")
    {
      Require(value.is_boolean(), "'isolate' must be a boolean");
    }
    else if (key == "t")
    {
      Require(value.is_number() && value.get<double>() >= 0.0 && value.get<double>() <= 1.0,
              "'t' must be a number in [0, 1]");
    }
    else
    {
      Fail(ErrorKind::kInvalidArgument, "unknown state field '" + key + "'");
    }
  }
}

struct Service::Impl
{
  mutable std::shared_mutex   lock;
  ordered_json                state = InitialState();
  std::uint64_t               state_version = 0;
  SelectionStore              selections;
  httplib::Server             server;
  std::atomic<bool>           serving{false};

  explicit Impl(std::filesystem::path const &store)
    : selections(store)
  {}
};

Service::Service(std::shared_ptr<Engine const> engine)
  : engine_(std::move(engine))
  , impl_(std::make_shared<Impl>(engine_->data_dir() / "selections.json"))
{}

namespace {

std::optional<Viewport> ViewportFrom(json const &v)
{
  if (v.is_null())
  {
    return std::nullopt;
  }
  Require(v.is_object() && v.contains("min") && v.contains("max"), "viewport must have min and max");
  auto const lo = v.at("min").get<std::array<double, 2>>();
  auto const hi = v.at("max").get<std::array<double, 2>>();
  Require(lo[0] < hi[0] && lo[1] < hi[1], "viewport min must be < max on both axes");
  return Viewport{lo[0], lo[1], hi[0], hi[1]};
}

}  // namespace

HttpResponse Service::Handle(HttpRequest const &request)
{
  Engine const &engine = *engine_;
  auto const   &data   = engine.dataset();
  auto const    parts  = SplitPath(request.path);
  auto const   &method = request.method;

  try
  {
    if (parts.size() == 1 && parts[0] == "health" && method == "GET")
    {
      return JsonResponse(200, {{"status", "ok"}});
    }

    if (parts.size() == 1 && parts[0] == "dataset" && method == "GET")
    {
      return JsonResponse(200, {{"name", data.name},
                                {"N", data.size()},
                                {"F", data.frame_count()},
                                {"k", data.k},
                                {"config_hash", engine.config_hash()}});
    }

    if (parts.size() == 1 && parts[0] == "points" && method == "GET")
    {
      json points = json::array();
      for (auto const &p : data.points)
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
      return JsonResponse(200, {{"points", points}});
    }

    if (parts.size() == 1 && parts[0] == "frames" && method == "GET")
    {
      json frames = json::array();
      for (auto const &f : data.frames)
      {
        frames.push_back({{"id", f.frame_id},
                          {"name", f.name},
                          {"metric", MetricName(f.metric)},
                          {"dims", f.vectors.cols},
                          {"projection", engine.projections()[f.frame_id].fallback ? "pca-fallback" : "ingested"}});
      }
      return JsonResponse(200, {{"frames", frames}});
    }

    if (parts.size() == 3 && parts[0] == "frames" && parts[2] == "projection" && method == "GET")
    {
      auto const frame = static_cast<FrameId>(ParseUnsigned(parts[1], "frame id"));
      engine.frame(frame);
      Transform2D transform;
      json        aligned_to = nullptr;
      if (auto it = request.query.find("aligned_to"); it != request.query.end())
      {
        auto const reference = static_cast<FrameId>(ParseUnsigned(it->second, "aligned_to"));
        engine.frame(reference);
        aligned_to = reference;
        std::optional<std::vector<PointId>> anchor;
        if (auto a = request.query.find("anchor"); a != request.query.end() && !a->second.empty())
        {
          bool const numeric = std::all_of(a->second.begin(), a->second.end(),
                                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == ','; });
          if (numeric)
          {
            anchor = ParseIdList(a->second);
          }
          else
          {
            std::shared_lock guard(impl_->lock);
            anchor = impl_->selections.Get(a->second).ids;
          }
        }
        // Only the requested frame and the reference take part in the fit.
        std::vector<Coords> pair{engine.coords()[reference], engine.coords()[frame]};
        auto aligned = anchor ? AlignFrames(pair, 0, std::span<PointId const>(*anchor)) : AlignFrames(pair, 0);
        transform    = frame == reference ? Transform2D::Identity() : aligned.transforms[1];
      }
      json coords = json::array();
      for (auto const &p : ApplyTransform(transform, engine.coords()[frame]))
      {
        coords.push_back({p[0], p[1]});
      }
      return JsonResponse(200, {{"frame", frame},
                                {"aligned_to", aligned_to},
                                {"fallback", engine.projections()[frame].fallback},
                                {"transform", TransformJson(transform)},
                                {"coordinates", coords}});
    }

    if (parts.size() == 1 && parts[0] == "neighbors" && method == "GET")
    {
      auto it = request.query.find("frame");
      Require(it != request.query.end(), "missing 'frame'");
      auto const  frame = static_cast<FrameId>(ParseUnsigned(it->second, "frame id"));
      auto const &table = engine.table(frame);
      auto        ids   = request.query.count("ids") ? ParseIdList(request.query.at("ids")) : std::vector<PointId>{};
      auto const  top   = request.query.count("top")
                              ? static_cast<std::uint32_t>(ParseUnsigned(request.query.at("top"), "top"))
                              : kDefaultNeighborList;
      CheckedSortedSelection(ids, data.size(), true);
      json rows = json::array();
      for (PointId x : ids)
      {
        auto const row = table.Row(x);
        rows.push_back({{"id", x}, {"neighbors", std::vector<PointId>(row.begin(), row.end())}});
      }
      json body = {{"frame", frame}, {"k", table.k()}, {"rows", rows}, {"selection_neighbors", json::array()}};
      if (!ids.empty())
      {
        body["selection_neighbors"] = NeighborListJson(SelectionNeighbors(ids, table, top));
      }
      return JsonResponse(200, body);
    }

    if (parts.size() == 1 && parts[0] == "compare" && method == "POST")
    {
      json const  body = ParseBody(request.body);
      auto const  a    = FrameField(body, "frame_a", engine);
      auto const  b    = FrameField(body, "frame_b", engine);
      auto const  sel  = IdsField(body, "selection", false);
      CheckedSortedSelection(sel, data.size(), true);
      auto const cmp = CompareFrames(engine.table(a), engine.table(b), sel,
                                     TopField(body, "top_changes", kDefaultCommonChanges),
                                     TopField(body, "top_neighbors", kDefaultNeighborList));
      return JsonResponse(200, {{"frame_a", a},
                                {"frame_b", b},
                                {"selection", sel},
                                {"trail_weights", cmp.trail_weights},
                                {"common_changes", {{"added", ScoredJson(cmp.common.added)},
                                                    {"removed", ScoredJson(cmp.common.removed)}}},
                                {"neighbor_diff", {{"a", DiffJson(cmp.diff.in_a)}, {"b", DiffJson(cmp.diff.in_b)}}}});
    }

    if (parts.size() == 1 && parts[0] == "stripes" && method == "POST")
    {
      json const body   = ParseBody(request.body);
      auto const sel    = IdsField(body, "selection", true);
      auto const matrix = ComputeFrameDistanceMatrix(engine.tables(), sel);
      json       rows   = json::array();
      for (std::uint32_t i = 0; i < matrix.frames; ++i)
      {
        rows.push_back(std::vector<double>(matrix.values.begin() + i * matrix.frames,
                                           matrix.values.begin() + (i + 1) * matrix.frames));
      }
      return JsonResponse(200, {{"selection", sel}, {"matrix", rows}, {"stripe", StripeJson(AssignStripeColors(matrix))}});
    }

    if (parts.size() == 1 && parts[0] == "suggestions" && method == "POST")
    {
      json const body = ParseBody(request.body);
      ViewState  state;
      state.current_frame = FrameField(body, "current_frame", engine);
      if (auto it = body.find("comparison_frame"); it != body.end() && !it->is_null())
      {
        state.comparison_frame = FrameValue(*it, "comparison_frame", engine);
      }
      state.selection = IdsField(body, "selection", false);
      if (auto it = body.find("viewport"); it != body.end())
      {
        state.viewport = ViewportFrom(*it);
      }
      auto const ranked = RankSuggestions(state, engine.pool(), engine.tables(), engine.coords(),
                                          TopField(body, "top", 10));
      json list = json::array();
      for (auto const &r : ranked)
      {
        list.push_back({{"ids", r.cluster.ids},
                        {"frame_a", r.cluster.frame_a},
                        {"frame_b", r.cluster.frame_b},
                        {"cutoff", r.cluster.cutoff},
                        {"interest", r.cluster.interest},
                        {"components", {{"consistency", r.cluster.components.consistency},
                                        {"inner_change", r.cluster.components.inner_change},
                                        {"overlap", r.cluster.components.overlap}}},
                        {"viewport_fraction", r.viewport_fraction},
                        {"selection_similarity", r.selection_similarity},
                        {"relevance", r.relevance},
                        {"score", r.score},
                        {"stripe", StripeJson(r.stripe)}});
      }
      return JsonResponse(200, {{"suggestions", list}});
    }

    if (parts.size() == 1 && parts[0] == "radius_select" && method == "POST")
    {
      json const body  = ParseBody(request.body);
      auto const frame = FrameField(body, "frame", engine);
      auto       it    = body.find("center");
      Require(it != body.end() && it->is_number_integer() && it->get<std::int64_t>() >= 0 &&
                  it->get<std::int64_t>() < data.size(),
              "'center' must be a valid point id");
      auto const center = it->get<PointId>();
      double     radius = 0.0;
      if (auto r = body.find("radius"); r != body.end() && !r->is_null())
      {
        Require(r->is_number(), "'radius' must be a number");
        radius = r->get<double>();
      }
      else
      {
        radius = DefaultRadius(engine.frame(frame), engine.table(frame), center);
      }
      return JsonResponse(200, {{"frame", frame},
                                {"center", center},
                                {"radius", radius},
                                {"ids", RadiusSelect(engine.frame(frame), center, radius)}});
    }

    if (parts.size() == 1 && parts[0] == "isolate" && method == "POST")
    {
      json const body     = ParseBody(request.body);
      auto const sel      = IdsField(body, "selection", true);
      auto const vicinity = TopField(body, "vicinity", kDefaultVicinity);
      return JsonResponse(200, {{"ids", IsolateSet(sel, engine.tables(), vicinity)}});
    }

    if (!parts.empty() && parts[0] == "selections")
    {
      if (parts.size() == 1 && method == "GET")
      {
        std::shared_lock guard(impl_->lock);
        json             list = json::array();
        for (auto const &s : impl_->selections.List())
        {
          list.push_back(SelectionJson(s));
        }
        return JsonResponse(200, {{"selections", list}});
      }
      if (parts.size() == 1 && method == "POST")
      {
        json const     body = ParseBody(request.body);
        SavedSelection s;
        auto           name = body.find("name");
        Require(name != body.end() && name->is_string(), "'name' must be a string");
        s.name = name->get<std::string>();
        s.ids  = IdsField(body, "ids", true);
        CheckedSortedSelection(s.ids, data.size());
        if (auto notes = body.find("notes"); notes != body.end() && !notes->is_null())
        {
          Require(notes->is_string(), "'notes' must be a string");
          s.notes = notes->get<std::string>();
        }
        s.created_at = NowIso8601();
        std::unique_lock guard(impl_->lock);
        return JsonResponse(201, SelectionJson(impl_->selections.Add(std::move(s))));
      }
      if (parts.size() == 2 && method == "GET")
      {
        std::shared_lock guard(impl_->lock);
        return JsonResponse(200, SelectionJson(impl_->selections.Get(parts[1])));
      }
      if (parts.size() == 2 && method == "DELETE")
      {
        std::unique_lock guard(impl_->lock);
        impl_->selections.Remove(parts[1]);
        return JsonResponse(200, {{"deleted", parts[1]}});
      }
    }

    if (parts.size() == 1 && parts[0] == "state")
    {
      if (method == "GET")
      {
        std::shared_lock guard(impl_->lock);
        HttpResponse     r = {200, impl_->state.dump(), {{"Content-Type", "application/json"}}};
        r.headers["X-State-Version"] = std::to_string(impl_->state_version);
        return r;
      }
      if (method == "PUT")
      {
        ordered_json state;
        try
        {
          state = ordered_json::parse(request.body);
        }
        catch (json::parse_error const &e)
        {
          Fail(ErrorKind::kInvalidArgument, std::string("invalid JSON: ") + e.what());
        }
        ValidateSessionState(state, engine);
        std::unique_lock guard(impl_->lock);
        impl_->state = std::move(state);
        ++impl_->state_version;
        HttpResponse r = {200, impl_->state.dump(), {{"Content-Type", "application/json"}}};
        r.headers["X-State-Version"] = std::to_string(impl_->state_version);
        return r;
      }
    }

    return ErrorResponse(404, "not found", method + " " + request.path);
  }
  catch (Error const &e)
  {
    int const status = StatusFor(e.kind());
    return ErrorResponse(status, status == 404 ? "not found" : status == 409 ? "conflict" : "bad request", e.what());
  }
  catch (json::exception const &e)
  {
    return ErrorResponse(400, "bad request", e.what());
  }
}

void Service::Serve(std::string const &host, int port, std::filesystem::path const &static_dir)
{
  auto &server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  if (!static_dir.empty())
  {
    server.set_mount_point("/ui", static_dir.string());
  }
  auto adapter = [this](httplib::Request const &req, httplib::Response &res) {
    HttpRequest request;
    request.method = req.method;
    request.path   = req.path;
    request.body   = req.body;
    for (auto const &[key, value] : req.params)
    {
      request.query[key] = value;
    }
    auto const response = Handle(request);
    res.status          = response.status;
    for (auto const &[key, value] : response.headers)
    {
      if (key != "Content-Type")
      {
        res.set_header(key, value);
      }
    }
    res.set_content(response.body, "application/json");
  };
  server.Get(".*", adapter);
  server.Post(".*", adapter);
  server.Put(".*", adapter);
  server.Delete(".*", adapter);
  server.Options(".*", [](httplib::Request const &, httplib::Response &res) { res.status = 204; });

  if (!server.bind_to_port(host, port))
  {
    Fail(ErrorKind::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->serving = true;
  server.listen_after_bind();
  impl_->serving = false;
}

void Service::Stop()
{
  impl_->server.stop();
}

}  // namespace embscope
