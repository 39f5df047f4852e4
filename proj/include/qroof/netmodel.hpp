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

// Per-layer arithmetic work (MACs, BOPS, compute cost) and memory traffic.

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qroof/layer.hpp"

namespace qroof {

// ceil(log2(x)) for x >= 1.
constexpr Count ceil_log2(Count x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

// MAC operations needed for one output pixel: n * m * (k^2 + 1).
inline Count ops_per_pixel(const Layer& l) {
  return detail::mul(l.n, l.m, detail::add(detail::mul(l.k, l.k), 1));
}

inline Count layer_total_ops(const Layer& l) {
  return detail::mul(ops_per_pixel(l), l.out_h, l.out_w);
}

// Accumulator width b_a + b_w + ceil(log2(n k^2)).
inline Count accumulator_bits(const Layer& l) {
  return l.b_a + l.b_w + ceil_log2(detail::mul(l.n, l.k, l.k));
}

// Bit operations, m n k^2 (b_a b_w + b_a + b_w + ceil(log2(n k^2))).
inline Count layer_bops(const Layer& l) {
  const Count per_mac = l.b_a * l.b_w + l.b_a + l.b_w + ceil_log2(detail::mul(l.n, l.k, l.k));
  return detail::mul(l.m, l.n, l.k, l.k, per_mac);
}

// Same with the real-valued log2 term, for comparison against rounded reference values.
inline double layer_bops_exact(const Layer& l) {
  const double nk2 = static_cast<double>(l.n) * static_cast<double>(l.k * l.k);
  const double per_mac = static_cast<double>(l.b_a * l.b_w + l.b_a + l.b_w) + std::log2(nk2);
  return static_cast<double>(l.m) * nk2 * per_mac;
}

// Rival metric m n k^2 (b_a + b_w).
inline Count compute_cost(const Layer& l) {
  return detail::mul(l.m, l.n, l.k, l.k, l.b_a + l.b_w);
}

// ---------------------------------------------------------------------------
// Traffic
// ---------------------------------------------------------------------------

enum class TrafficVariant { single_pass, grouped_onchip, grouped_spill };

constexpr std::string_view to_string(TrafficVariant v) {
  switch (v) {
    case TrafficVariant::single_pass: return "single-pass";
    case TrafficVariant::grouped_onchip: return "grouped-onchip";
    case TrafficVariant::grouped_spill: return "grouped-spill";
  }
  return "?";
}

inline TrafficVariant parse_traffic_variant(std::string_view s) {
  if (s == "single-pass" || s == "single") return TrafficVariant::single_pass;
  if (s == "grouped-onchip" || s == "onchip") return TrafficVariant::grouped_onchip;
  if (s == "grouped-spill" || s == "spill") return TrafficVariant::grouped_spill;
  throw ValidationError(fmt::format(
      "unknown traffic variant '{}' (expected single-pass, grouped-onchip or grouped-spill)", s));
}

// How a layer is scheduled against memory. Grouped variants iterate output
// groups in the outer loop and input groups in the inner loop.
struct TrafficModel {
  TrafficVariant variant = TrafficVariant::single_pass;
  Count group_in = 1;
  Count group_out = 1;
  std::optional<Count> accumulator_bits;

  static TrafficModel single_pass() { return {}; }
  static TrafficModel grouped_onchip(Count gi, Count go) {
    return {TrafficVariant::grouped_onchip, gi, go, std::nullopt};
  }
  static TrafficModel grouped_spill(Count gi, Count go) {
    return {TrafficVariant::grouped_spill, gi, go, std::nullopt};
  }
};

inline void validate(const TrafficModel& model) {
  if (model.variant != TrafficVariant::single_pass &&
      (model.group_in < 1 || model.group_out < 1)) {
    throw ValidationError("grouped traffic model requires group_in >= 1 and group_out >= 1");
  }
  if (model.accumulator_bits && *model.accumulator_bits < 1) {
    throw ValidationError("accumulator_bits override must be >= 1");
  }
}

inline Count accumulator_bits(const Layer& l, const TrafficModel& model) {
  return model.accumulator_bits.value_or(accumulator_bits(l));
}

// Bits moved over the memory bus for one layer. The total is always the
// component sum.
class TrafficBreakdown {
 public:
  TrafficBreakdown() = default;
  TrafficBreakdown(Count weight_bits, Count input_bits, Count output_bits, Count spill_bits)
      : weight_bits_(weight_bits),
        input_bits_(input_bits),
        output_bits_(output_bits),
        spill_bits_(spill_bits),
        total_bits_(detail::add(detail::add(weight_bits, input_bits),
                                detail::add(output_bits, spill_bits))) {
    assert(total_bits_ == weight_bits_ + input_bits_ + output_bits_ + spill_bits_);
  }

  Count weight_bits() const { return weight_bits_; }
  Count input_bits() const { return input_bits_; }
  Count output_bits() const { return output_bits_; }
  Count spill_bits() const { return spill_bits_; }
  Count total_bits() const { return total_bits_; }

  TrafficBreakdown& operator+=(const TrafficBreakdown& o) {
    *this = TrafficBreakdown(detail::add(weight_bits_, o.weight_bits_),
                             detail::add(input_bits_, o.input_bits_),
                             detail::add(output_bits_, o.output_bits_),
                             detail::add(spill_bits_, o.spill_bits_));
    return *this;
  }

  bool operator==(const TrafficBreakdown&) const = default;

 private:
  Count weight_bits_ = 0;
  Count input_bits_ = 0;
  Count output_bits_ = 0;
  Count spill_bits_ = 0;
  Count total_bits_ = 0;
};

inline TrafficBreakdown layer_traffic(const Layer& l, const TrafficModel& model = {}) {
  validate(model);
  using detail::ceil_div;
  using detail::mul;
  const Count weights = mul(l.n, l.m, l.k, l.k, l.b_w);
  Count inputs = mul(l.n, l.in_h, l.in_w, l.b_a);
  const Count outputs = mul(l.m, l.out_h, l.out_w, l.b_a);
  Count spill = 0;
  if (model.variant != TrafficVariant::single_pass) {
    inputs = mul(inputs, ceil_div(l.m, model.group_out));
  }
  if (model.variant == TrafficVariant::grouped_spill) {
    const Count extra_passes = ceil_div(l.n, model.group_in) - 1;
    spill = mul(2, extra_passes, l.m, l.out_h, l.out_w, accumulator_bits(l, model));
  }
  return {weights, inputs, outputs, spill};
}

inline double ops_per_bit(const Layer& l, const TrafficModel& model = {}) {
  return static_cast<double>(layer_total_ops(l)) /
         static_cast<double>(layer_traffic(l, model).total_bits());
}

// ---------------------------------------------------------------------------
// Network aggregation
// ---------------------------------------------------------------------------

struct LayerMetrics {
  std::string name;
  Count ops = 0;
  Count bops = 0;
  Count compute_cost = 0;
  TrafficBreakdown traffic;
  double ops_per_bit = 0.0;
};

struct NetworkTotals {
  std::vector<LayerMetrics> layers;  // in network order
  Count ops = 0;
  Count bops = 0;
  Count compute_cost = 0;
  TrafficBreakdown traffic;
  double ops_per_bit = 0.0;
};

inline LayerMetrics layer_metrics(const Layer& l, const TrafficModel& model = {}) {
  LayerMetrics lm;
  lm.name = l.name;
  lm.ops = layer_total_ops(l);
  lm.bops = layer_bops(l);
  lm.compute_cost = compute_cost(l);
  lm.traffic = layer_traffic(l, model);
  lm.ops_per_bit = static_cast<double>(lm.ops) / static_cast<double>(lm.traffic.total_bits());
  return lm;
}

inline NetworkTotals network_totals(const Network& net, const TrafficModel& model = {}) {
  validate(net);
  NetworkTotals totals;
  totals.layers.reserve(net.layers.size());
  for (const auto& l : net.layers) {
    auto lm = layer_metrics(l, model);
    totals.ops = detail::add(totals.ops, lm.ops);
    totals.bops = detail::add(totals.bops, lm.bops);
    totals.compute_cost = detail::add(totals.compute_cost, lm.compute_cost);
    totals.traffic += lm.traffic;
    totals.layers.push_back(std::move(lm));
  }
  totals.ops_per_bit =
      static_cast<double>(totals.ops) / static_cast<double>(totals.traffic.total_bits());
  return totals;
}

}  // namespace qroof
