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

// JSON network descriptions:
//   { "name": str, "layers": [ { "name", "k", "n", "m", "out_h", "out_w",
//     "in_h"?, "in_w"?, "b_w", "b_a" } ], "metadata"?: object }

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "qroof/layer.hpp"

namespace qroof {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
    throw ParseError(fmt::format("{}: line {}: {}", source, line, e.what()));
  }
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                           std::string_view context) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(fmt::format("{}: unknown field '{}'", context, key));
    }
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, std::string_view key,
                                     std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(fmt::format("{}: missing field '{}'", context, key));
  return *it;
}

inline std::int64_t get_int(const nlohmann::json& v, std::string_view context) {
  if (!v.is_number_integer()) {
    throw ParseError(fmt::format("{}: expected integer, got {}", context, v.dump()));
  }
  return v.get<std::int64_t>();
}

inline double get_number(const nlohmann::json& v, std::string_view context) {
  if (!v.is_number()) {
    throw ParseError(fmt::format("{}: expected number, got {}", context, v.dump()));
  }
  return v.get<double>();
}

inline std::string get_string(const nlohmann::json& v, std::string_view context) {
  if (!v.is_string()) {
    throw ParseError(fmt::format("{}: expected string, got {}", context, v.dump()));
  }
  return v.get<std::string>();
}

// Integer field that must be >= 1 to be representable as a Count.
inline Count get_dim(const nlohmann::json& v, std::string_view context) {
  const auto i = get_int(v, context);
  if (i < 1) throw ValidationError(fmt::format("{} must be >= 1, got {}", context, i));
  return static_cast<Count>(i);
}

}  // namespace detail

inline Layer layer_from_json(const nlohmann::json& j, std::string_view context) {
  using namespace detail;
  if (!j.is_object()) throw ParseError(fmt::format("{}: expected object", context));
  reject_unknown(j, {"name", "k", "n", "m", "out_h", "out_w", "in_h", "in_w", "b_w", "b_a"},
                 context);
  auto field = [&](std::string_view key) {
    return get_dim(require(j, key, context), fmt::format("{}.{}", context, key));
  };
  Layer l;
  l.name = get_string(require(j, "name", context), fmt::format("{}.name", context));
  l.k = field("k");
  l.n = field("n");
  l.m = field("m");
  l.out_h = field("out_h");
  l.out_w = field("out_w");
  l.in_h = j.contains("in_h") ? field("in_h") : l.out_h;
  l.in_w = j.contains("in_w") ? field("in_w") : l.out_w;
  l.b_w = field("b_w");
  l.b_a = field("b_a");
  validate(l);
  return l;
}

inline nlohmann::json to_json(const Layer& l) {
  return {{"name", l.name}, {"k", l.k},         {"n", l.n},         {"m", l.m},
          {"out_h", l.out_h}, {"out_w", l.out_w}, {"in_h", l.in_h}, {"in_w", l.in_w},
          {"b_w", l.b_w},     {"b_a", l.b_a}};
}

inline Network network_from_json(const nlohmann::json& j, std::string_view source = "network") {
  using namespace detail;
  if (!j.is_object()) throw ParseError(fmt::format("{}: expected a JSON object", source));
  reject_unknown(j, {"name", "layers", "metadata"}, source);
  Network net;
  net.name = get_string(require(j, "name", source), fmt::format("{}.name", source));
  const auto& layers = require(j, "layers", source);
  if (!layers.is_array()) throw ParseError(fmt::format("{}.layers: expected array", source));
  for (std::size_t i = 0; i < layers.size(); ++i) {
    net.layers.push_back(layer_from_json(layers[i], fmt::format("{}.layers[{}]", source, i)));
  }
  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) throw ParseError(fmt::format("{}.metadata: expected object", source));
    net.metadata = *it;
  }
  validate(net);
  return net;
}

inline nlohmann::json to_json(const Network& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net.layers) layers.push_back(to_json(l));
  nlohmann::json j = {{"name", net.name}, {"layers", std::move(layers)}};
  if (!net.metadata.empty()) j["metadata"] = net.metadata;
  return j;
}

inline Network parse_network(std::string_view text, std::string_view source = "network") {
  return network_from_json(detail::parse_json_text(text, source), source);
}

inline Network load_network(const std::filesystem::path& path) {
  return parse_network(detail::read_file(path), path.string());
}

}  // namespace qroof
