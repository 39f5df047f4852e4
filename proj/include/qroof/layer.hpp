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

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "qroof/error.hpp"

namespace qroof {

using Count = std::uint64_t;

// One convolutional layer. Spatial dims are in pixels, bitwidths in bits.
struct Layer {
  std::string name;
  Count k = 1;  // kernel side
  Count n = 1;  // input features
  Count m = 1;  // output features
  Count out_h = 1;
  Count out_w = 1;
  Count in_h = 1;
  Count in_w = 1;
  Count b_w = 8;  // weight bitwidth
  Count b_a = 8;  // activation bitwidth

  bool operator==(const Layer&) const = default;
};

inline constexpr Count kMaxBitwidth = 64;

inline void validate(const Layer& layer) {
  auto require_positive = [&](Count v, const char* field) {
    if (v < 1) {
      throw ValidationError(
          fmt::format("layer '{}': {} must be >= 1", layer.name, field));
    }
  };
  require_positive(layer.k, "k");
  require_positive(layer.n, "n");
  require_positive(layer.m, "m");
  require_positive(layer.out_h, "out_h");
  require_positive(layer.out_w, "out_w");
  require_positive(layer.in_h, "in_h");
  require_positive(layer.in_w, "in_w");
  for (auto [v, field] : {std::pair{layer.b_w, "b_w"}, std::pair{layer.b_a, "b_a"}}) {
    if (v < 1 || v > kMaxBitwidth) {
      throw ValidationError(fmt::format(
          "layer '{}': {} must be in [1, {}], got {}", layer.name, field, kMaxBitwidth, v));
    }
  }
}

struct Network {
  std::string name;
  std::vector<Layer> layers;
  // Free-form; carried verbatim and never interpreted.
  nlohmann::json metadata = nlohmann::json::object();
};

inline void validate(const Network& net) {
  if (net.layers.empty()) {
    throw ValidationError(fmt::format("network '{}': must contain at least one layer", net.name));
  }
  std::set<std::string> seen;
  for (const auto& layer : net.layers) {
    validate(layer);
    if (!seen.insert(layer.name).second) {
      throw ValidationError(
          fmt::format("network '{}': duplicate layer name '{}'", net.name, layer.name));
    }
  }
}

// Same layer with both bitwidths replaced.
inline Layer with_bits(Layer layer, Count b_w, Count b_a) {
  layer.b_w = b_w;
  layer.b_a = b_a;
  return layer;
}

inline Network with_bits(Network net, Count b_w, Count b_a) {
  for (auto& layer : net.layers) layer = with_bits(std::move(layer), b_w, b_a);
  return net;
}

namespace detail {

// Overflow-checked product for bit and operation counts.
inline Count mul(Count a, Count b) {
  Count r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error(fmt::format("count overflow: {} * {}", a, b));
  }
  return r;
}

template <typename... Ts>
Count mul(Count a, Count b, Ts... rest) {
  if constexpr (sizeof...(rest) == 0) {
    return mul(a, b);
  } else {
    return mul(mul(a, b), rest...);
  }
}

inline Count add(Count a, Count b) {
  Count r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error(fmt::format("count overflow: {} + {}", a, b));
  }
  return r;
}

inline constexpr Count ceil_div(Count a, Count b) { return a / b + (a % b != 0); }

}  // namespace detail

}  // namespace qroof
