// Copyright 2026 The qroof Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON API routes over cpp-httplib. Stateless: every request carries its own
// inputs; the preset store is read-only after startup.
//
//   GET  /api/presets
//   GET  /api/presets/{name}
//   POST /api/analyze
//   POST /api/size
//   POST /api/timeline
//   POST /api/reverse

#include <functional>
#include <memory>

#include <httplib.h>

#include "qroof/service.hpp"

namespace qroof {

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, std::string_view kind,
                       std::string_view message) {
  send_json(res, status, {{"error", kind}, {"detail", message}});
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    send_json(res, 200, f());
  } catch (const ParseError& e) {
    send_error(res, 400, "parse", e.what());
  } catch (const ValidationError& e) {
    send_error(res, 400, "validation", e.what());
  } catch (const InfeasibleError& e) {
    send_error(res, 422, "infeasible", e.what());
  } catch (const std::overflow_error& e) {
    send_error(res, 400, "overflow", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  return parse_json_text(req.body, "request body");
}

}  // namespace detail

inline void register_routes(httplib::Server& svr, std::shared_ptr<const PresetStore> presets) {
  using detail::guarded;
  using detail::parse_body;
  svr.Get("/api/presets", [presets](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { return handle_presets(*presets); });
  });
  svr.Get(R"(/api/presets/([A-Za-z0-9._-]+))",
          [presets](const httplib::Request& req, httplib::Response& res) {
            const std::string name = req.matches[1];
            try {
              detail::send_json(res, 200, handle_preset(*presets, name));
            } catch (const ValidationError& e) {
              detail::send_error(res, 404, "not-found", e.what());
            } catch (const std::exception& e) {
              detail::send_error(res, 500, "internal", e.what());
            }
          });

  using Handler = nlohmann::json (*)(const nlohmann::json&, const PresetStore&);
  auto post = [&](const char* path, Handler handler) {
    svr.Post(path, [presets, handler](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { return handler(parse_body(req), *presets); });
    });
  };
  post("/api/analyze", &handle_analyze);
  post("/api/size", &handle_size);
  post("/api/timeline", &handle_timeline);
  post("/api/reverse", &handle_reverse);
}

}  // namespace qroof
