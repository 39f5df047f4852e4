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

// OPS-based roofline: x = operations per bit moved over the memory bus,
// y = operations per second. A layer is placed at (ops/bit, required ops/s)
// and compared against the accelerator's horizontal compute ceiling and the
// memory diagonal y = x * bandwidth.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qroof/hwmodel.hpp"

namespace qroof {

struct MemoryConfig {
  double transfer_rate = 0.0;  // transfers/s
  double bus_width = 0.0;      // bits per transfer
  double derating = 1.0;       // efficiency factor in (0, 1]

  double bandwidth() const { return transfer_rate * bus_width * derating; }  // bits/s
};

inline void validate(const MemoryConfig& mem) {
  if (!(mem.transfer_rate > 0.0)) {
    throw ValidationError(fmt::format("transfer_rate must be > 0, got {}", mem.transfer_rate));
  }
  if (!(mem.bus_width > 0.0)) {
    throw ValidationError(fmt::format("bus_width must be > 0, got {}", mem.bus_width));
  }
  if (!(mem.derating > 0.0 && mem.derating <= 1.0)) {
    throw ValidationError(fmt::format("derating must be in (0, 1], got {}", mem.derating));
  }
}

// 2.4 GT/s DDR4 with a 64-bit bus.
inline MemoryConfig ddr4_2400_x64() { return {2.4e9, 64.0, 1.0}; }

enum class PointVariant { raw, partial_sum };

constexpr std::string_view to_string(PointVariant v) {
  return v == PointVariant::raw ? "raw" : "partial-sum";
}

struct RooflinePoint {
  std::string layer_name;
  double ops_per_bit = 0.0;
  double required_ops = 0.0;  // ops/s
  PointVariant variant = PointVariant::raw;
  Count passes = 1;  // clocks per output pixel
};

enum class Bound { feasible, compute_bound, memory_bound, compute_and_memory_bound };

constexpr std::string_view to_string(Bound b) {
  switch (b) {
    case Bound::feasible: return "feasible";
    case Bound::compute_bound: return "compute-bound";
    case Bound::memory_bound: return "memory-bound";
    case Bound::compute_and_memory_bound: return "compute-and-memory-bound";
  }
  return "?";
}

struct Classification {
  Bound bound = Bound::feasible;
  bool compute_bound = false;
  bool memory_bound = false;
  bool borderline = false;
  double memory_ceiling = 0.0;  // ops_per_bit * bandwidth at this point
};

inline constexpr double kDefaultBorderlineTol = 0.05;

inline double layer_required_ops(const Layer& l, double frequency) {
  if (!(frequency > 0.0)) {
    throw ValidationError(fmt::format("frequency must be > 0, got {}", frequency));
  }
  return static_cast<double>(ops_per_pixel(l)) * frequency;
}

inline Classification classify(const RooflinePoint& point, double capacity, double bandwidth,
                               double borderline_tol = kDefaultBorderlineTol) {
  Classification c;
  c.memory_ceiling = point.ops_per_bit * bandwidth;
  c.compute_bound = point.required_ops > capacity;
  c.memory_bound = point.required_ops > c.memory_ceiling;
  c.borderline = std::abs(point.required_ops - capacity) / capacity <= borderline_tol;
  if (c.compute_bound && c.memory_bound) {
    c.bound = Bound::compute_and_memory_bound;
  } else if (c.compute_bound) {
    c.bound = Bound::compute_bound;
  } else if (c.memory_bound) {
    c.bound = Bound::memory_bound;
  }
  return c;
}

inline Classification classify(const RooflinePoint& point, const SizingResult& sizing,
                               const MemoryConfig& mem,
                               double borderline_tol = kDefaultBorderlineTol) {
  return classify(point, sizing.capacity, mem.bandwidth(), borderline_tol);
}

enum class SpillMode { onchip, spill };

constexpr std::string_view to_string(SpillMode s) {
  return s == SpillMode::onchip ? "onchip" : "spill";
}

inline SpillMode parse_spill_mode(std::string_view s) {
  if (s == "onchip" || s == "grouped-onchip") return SpillMode::onchip;
  if (s == "spill" || s == "grouped-spill") return SpillMode::spill;
  throw ValidationError(fmt::format("unknown spill mode '{}' (expected onchip or spill)", s));
}

inline TrafficModel grouped_model(const ArrayDims& array, SpillMode spill) {
  return spill == SpillMode::onchip ? TrafficModel::grouped_onchip(array.rows, array.cols)
                                    : TrafficModel::grouped_spill(array.rows, array.cols);
}

inline Count partial_sum_passes(const Layer& l, const ArrayDims& array) {
  return detail::ceil_div(l.n, array.rows) * detail::ceil_div(l.m, array.cols);
}

inline RooflinePoint raw_point(const Layer& l, double frequency) {
  return {l.name, ops_per_bit(l), layer_required_ops(l, frequency), PointVariant::raw, 1};
}

// Splits input/output features into array-sized groups, spending several
// clocks per output pixel.
inline RooflinePoint partial_sum_transform(const Layer& l, const ArrayDims& array,
                                           double frequency, SpillMode spill) {
  if (array.rows < 1 || array.cols < 1) {
    throw ValidationError("partial-sum array dims must be >= 1");
  }
  RooflinePoint p;
  p.layer_name = l.name;
  p.variant = PointVariant::partial_sum;
  p.passes = partial_sum_passes(l, array);
  p.required_ops = layer_required_ops(l, frequency) / static_cast<double>(p.passes);
  p.ops_per_bit = ops_per_bit(l, grouped_model(array, spill));
  return p;
}

struct ReportPoint {
  RooflinePoint point;
  Classification classification;
};

struct RooflineReport {
  std::string network_name;
  double frequency = 0.0;
  double compute_ceiling = 0.0;  // ops/s
  double bandwidth = 0.0;        // bits/s
  double ridge_point = 0.0;      // ops/bit
  double borderline_tol = kDefaultBorderlineTol;
  ArrayDims partial_sum_array;
  SpillMode spill = SpillMode::onchip;
  SizingResult sizing;
  std::vector<ReportPoint> points;  // raw then partial-sum for each layer, in layer order
};

struct ReportOptions {
  std::optional<ArrayDims> array;  // defaults to the sized array
  SpillMode spill = SpillMode::onchip;
  double borderline_tol = kDefaultBorderlineTol;
};

inline RooflineReport build_report(const Network& net, const AcceleratorConfig& accel,
                                   const MemoryConfig& mem, const ReportOptions& opts = {}) {
  validate(net);
  validate(mem);
  RooflineReport r;
  r.network_name = net.name;
  r.frequency = accel.frequency;
  r.sizing = size_pe_array(accel);
  r.compute_ceiling = r.sizing.capacity;
  r.bandwidth = mem.bandwidth();
  r.ridge_point = r.compute_ceiling / r.bandwidth;
  r.borderline_tol = opts.borderline_tol;
  r.partial_sum_array = opts.array.value_or(r.sizing.array);
  r.spill = opts.spill;
  r.points.reserve(2 * net.layers.size());
  for (const auto& l : net.layers) {
    for (auto p : {raw_point(l, accel.frequency),
                   partial_sum_transform(l, r.partial_sum_array, accel.frequency, opts.spill)}) {
      auto c = classify(p, r.compute_ceiling, r.bandwidth, r.borderline_tol);
      r.points.push_back({std::move(p), c});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reverse design: area -> array -> frequency -> bandwidth
// ---------------------------------------------------------------------------

struct ReverseDesignRequest {
  double area_budget = 0.0;  // um^2
  Count b_w = 8;
  Count b_a = 8;
  Count k = 3;
  ArithmeticKind kind = ArithmeticKind::fixed;
  CalibrationProfile profile = default_calibration();
  MemoryConfig mem = ddr4_2400_x64();
  SpillMode spill = SpillMode::onchip;
  std::optional<double> target_frequency;  // Hz, for required_bandwidth
};

struct ReverseDesignResult {
  SizingResult sizing;  // capacity evaluated at max_frequency (0 when unbounded)
  double max_frequency = 0.0;  // Hz; +inf when no layer is memory-limited
  bool memory_limited = false;
  std::string limiting_layer;
  double target_frequency = 0.0;
  double required_bandwidth = 0.0;  // bits/s at target_frequency
};

inline ReverseDesignResult reverse_design(const Network& net, const ReverseDesignRequest& req) {
  validate(net);
  AcceleratorConfig accel;
  accel.area_budget = req.area_budget;
  accel.frequency = 1.0;  // capacity scales linearly; rescaled below
  accel.kind = req.kind;
  accel.b_w = req.b_w;
  accel.b_a = req.b_a;
  accel.k = req.k;
  accel.profile = req.profile;
  ReverseDesignResult out;
  out.sizing = size_pe_array(accel);
  const auto array = out.sizing.array;
  const double bandwidth = req.mem.bandwidth();
  if (!(bandwidth > 0.0)) throw ValidationError("memory bandwidth must be > 0");

  out.max_frequency = std::numeric_limits<double>::infinity();
  // Bits of bandwidth needed per Hz of clock, worst layer.
  double bits_per_hz = 0.0;
  for (auto l : net.layers) {
    l.b_w = req.b_w;
    l.b_a = req.b_a;
    const auto passes = static_cast<double>(partial_sum_passes(l, array));
    const double opb = ops_per_bit(l, grouped_model(array, req.spill));
    if (!(opb > 0.0)) {
      throw std::logic_error(fmt::format("layer '{}' moves bits but performs no ops", l.name));
    }
    const double ops_per_clock = static_cast<double>(ops_per_pixel(l)) / passes;
    const double f_max = opb * bandwidth / ops_per_clock;
    if (f_max < out.max_frequency) {
      out.max_frequency = f_max;
      out.limiting_layer = l.name;
    }
    bits_per_hz = std::max(bits_per_hz, ops_per_clock / opb);
  }
  out.memory_limited = std::isfinite(out.max_frequency);
  out.target_frequency = req.target_frequency.value_or(out.memory_limited ? out.max_frequency : 0.0);
  if (req.target_frequency && !(*req.target_frequency > 0.0)) {
    throw ValidationError("target frequency must be > 0");
  }
  out.required_bandwidth = bits_per_hz * out.target_frequency;
  out.sizing.capacity = out.memory_limited ? out.sizing.capacity * out.max_frequency : 0.0;
  return out;
}

}  // namespace qroof
