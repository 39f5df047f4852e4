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

// JSON and CSV renderings of analysis results. Output is deterministic:
// fixed key order from nlohmann::json's sorted objects, shortest round-trip
// number formatting, no timestamps.

#include <string>

#include "qroof/hardware_config.hpp"
#include "qroof/regression.hpp"
#include "qroof/roofline.hpp"
#include "qroof/timeline.hpp"

namespace qroof {

inline nlohmann::json to_json(const TrafficBreakdown& t) {
  return {{"weight_bits", t.weight_bits()}, {"input_bits", t.input_bits()},
          {"output_bits", t.output_bits()}, {"spill_bits", t.spill_bits()},
          {"total_bits", t.total_bits()}};
}

inline nlohmann::json to_json(const LayerMetrics& m) {
  return {{"name", m.name},
          {"ops", m.ops},
          {"bops", m.bops},
          {"compute_cost", m.compute_cost},
          {"traffic", to_json(m.traffic)},
          {"ops_per_bit", m.ops_per_bit}};
}

inline nlohmann::json to_json(const NetworkTotals& t) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : t.layers) layers.push_back(to_json(l));
  return {{"layers", std::move(layers)},
          {"ops", t.ops},
          {"bops", t.bops},
          {"compute_cost", t.compute_cost},
          {"traffic", to_json(t.traffic)},
          {"ops_per_bit", t.ops_per_bit}};
}

inline nlohmann::json to_json(const TrafficModel& m) {
  nlohmann::json j = {{"variant", to_string(m.variant)}};
  if (m.variant != TrafficVariant::single_pass) {
    j["group_in"] = m.group_in;
    j["group_out"] = m.group_out;
  }
  if (m.accumulator_bits) j["accumulator_bits"] = *m.accumulator_bits;
  return j;
}

inline nlohmann::json to_json(const SizingResult& s) {
  nlohmann::json j = {{"pe_area_um2", s.pe_area},
                      {"pe_count", s.pe_count},
                      {"array_side", s.array_side},
                      {"array", {s.array.rows, s.array.cols}},
                      {"capacity_ops", s.capacity},
                      {"est_power_mw", s.est_power}};
  if (s.multiplier_count) j["multiplier_count"] = s.multiplier_count;
  return j;
}

inline nlohmann::json to_json(const ReportPoint& p) {
  const auto& c = p.classification;
  return {{"layer", p.point.layer_name},
          {"variant", to_string(p.point.variant)},
          {"passes", p.point.passes},
          {"ops_per_bit", p.point.ops_per_bit},
          {"required_ops", p.point.required_ops},
          {"memory_ceiling_ops", c.memory_ceiling},
          {"classification", to_string(c.bound)},
          {"compute_bound", c.compute_bound},
          {"memory_bound", c.memory_bound},
          {"borderline", c.borderline}};
}

inline nlohmann::json to_json(const RooflineReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) points.push_back(to_json(p));
  return {{"network", r.network_name},
          {"frequency_hz", r.frequency},
          {"compute_ceiling_ops", r.compute_ceiling},
          {"bandwidth_bits", r.bandwidth},
          {"ridge_point", r.ridge_point},
          {"borderline_tol", r.borderline_tol},
          {"partial_sum_array", {r.partial_sum_array.rows, r.partial_sum_array.cols}},
          {"spill", to_string(r.spill)},
          {"sizing", to_json(r.sizing)},
          {"points", std::move(points)}};
}

inline std::string to_csv(const RooflineReport& r) {
  std::string out = "layer,variant,ops_per_bit,required_ops,classification,borderline\n";
  for (const auto& p : r.points) {
    out += fmt::format("{},{},{},{},{},{}\n", p.point.layer_name, to_string(p.point.variant),
                       p.point.ops_per_bit, p.point.required_ops,
                       to_string(p.classification.bound), p.classification.borderline);
  }
  return out;
}

inline nlohmann::json to_json(const TimelineTrace& t) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : t.segments) {
    segs.push_back({{"cycle_start", s.cycle_start},
                    {"cycle_end", s.cycle_end},
                    {"bits_per_cycle", s.bits_per_cycle},
                    {"phase", to_string(s.phase)}});
  }
  return {{"prefetch_end", t.prefetch_end}, {"row_starts", t.row_starts},
          {"segments", std::move(segs)},    {"total_cycles", t.total_cycles},
          {"total_bits", t.total_bits},     {"stall_cycles", t.stall_cycles},
          {"utilization", t.utilization}};
}

inline std::string to_csv(const TimelineTrace& t) {
  std::string out = "cycle_start,cycle_end,bits_per_cycle,phase\n";
  for (const auto& s : t.segments) {
    out += fmt::format("{},{},{},{}\n", s.cycle_start, s.cycle_end, s.bits_per_cycle,
                       to_string(s.phase));
  }
  return out;
}

inline nlohmann::json to_json(const FitResult& f) {
  return {{"degree", f.degree},
          {"coefficients", f.coefficients},
          {"r_squared", f.r_squared},
          {"residuals", f.residuals},
          {"max_rel_error", f.max_rel_error}};
}

inline nlohmann::json to_json(const MetricComparison& c) {
  return {{"bops_fit", to_json(c.bops_fit)},
          {"cc_fit", to_json(c.cc_fit)},
          {"bops_max_loo_error", c.bops_max_loo_error},
          {"cc_max_loo_error", c.cc_max_loo_error},
          {"verdict", to_string(c.verdict)}};
}

inline nlohmann::json to_json(const ReverseDesignResult& r) {
  auto finite_or_null = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  return {{"sizing", to_json(r.sizing)},
          {"max_frequency_hz", finite_or_null(r.max_frequency)},
          {"memory_limited", r.memory_limited},
          {"limiting_layer", r.limiting_layer},
          {"target_frequency_hz", r.target_frequency},
          {"required_bandwidth_bits", r.required_bandwidth}};
}

}  // namespace qroof
