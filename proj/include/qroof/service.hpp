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

// Request handling shared by the command-line tool and the JSON API. Every
// handler takes a parsed request object and returns the response object;
// the CLI and the server both go through these functions so identical
// inputs give identical output.
//
// Networks are evaluated at the accelerator's precision: a fixed-point
// accelerator's (b_w, b_a) replace the layers' bitwidths and a float32
// accelerator uses 32 bits. An explicit `bits` value overrides both.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qroof/hardware_config.hpp"
#include "qroof/report_io.hpp"

namespace qroof {

// Shipped presets under a data directory:
//   presets/<name>.json       networks
//   calibration/<name>.json   calibration profiles
//   hardware/<name>.toml      hardware descriptions
class PresetStore {
 public:
  explicit PresetStore(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {}

  const std::filesystem::path& data_dir() const { return dir_; }

  std::vector<std::string> networks() const { return list("presets", ".json"); }
  std::vector<std::string> calibrations() const { return list("calibration", ".json"); }
  std::vector<std::string> hardware() const { return list("hardware", ".toml"); }

  Network network(std::string_view name) const {
    return load_network(path("presets", name, ".json"));
  }
  CalibrationProfile calibration(std::string_view name) const {
    return load_calibration(path("calibration", name, ".json"));
  }
  HardwareConfig hardware_config(std::string_view name) const {
    return load_hardware(path("hardware", name, ".toml"));
  }

  bool has(std::string_view sub, std::string_view name, std::string_view ext) const {
    return valid_name(name) && std::filesystem::is_regular_file(dir_ / sub / (std::string(name) + std::string(ext)));
  }

 private:
  static bool valid_name(std::string_view name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    }) && name.find("..") == std::string_view::npos;
  }

  std::filesystem::path path(std::string_view sub, std::string_view name,
                             std::string_view ext) const {
    if (!has(sub, name, ext)) {
      throw ValidationError(fmt::format("unknown {} preset '{}'", sub, name));
    }
    return dir_ / sub / (std::string(name) + std::string(ext));
  }

  std::vector<std::string> list(std::string_view sub, std::string_view ext) const {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir_ / sub, ec)) {
      if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::filesystem::path dir_;
};

// ---------------------------------------------------------------------------
// Core analyses on resolved inputs
// ---------------------------------------------------------------------------

struct Precision {
  Count b_w;
  Count b_a;
};

inline Precision effective_precision(const AcceleratorConfig& accel,
                                     std::optional<Count> bits = std::nullopt) {
  if (bits) return {*bits, *bits};
  if (accel.kind == ArithmeticKind::float32) return {32, 32};
  return {accel.b_w, accel.b_a};
}

inline HardwareConfig with_precision(HardwareConfig hw, Precision p) {
  if (hw.accel.kind == ArithmeticKind::fixed) {
    hw.accel.b_w = p.b_w;
    hw.accel.b_a = p.b_a;
  }
  return hw;
}

inline RooflineReport roofline_report(const Network& net, const HardwareConfig& hw,
                                      const ReportOptions& opts, std::optional<Count> bits = {}) {
  const auto p = effective_precision(hw.accel, bits);
  return build_report(with_bits(net, p.b_w, p.b_a), with_precision(hw, p).accel, hw.mem, opts);
}

inline nlohmann::json analyze_roofline(const Network& net, const HardwareConfig& hw,
                                       const ReportOptions& opts, std::optional<Count> bits = {}) {
  return to_json(roofline_report(net, hw, opts, bits));
}

// Per-layer metrics table, with raw-point classification when hardware is given.
inline nlohmann::json analyze_network(const Network& net, const TrafficModel& model,
                                      const std::optional<HardwareConfig>& hw,
                                      std::optional<Count> bits = {}) {
  Network evaluated = net;
  if (hw) {
    const auto p = effective_precision(hw->accel, bits);
    evaluated = with_bits(net, p.b_w, p.b_a);
  } else if (bits) {
    evaluated = with_bits(net, *bits, *bits);
  }
  const auto totals = network_totals(evaluated, model);
  nlohmann::json j = {{"network", net.name},
                      {"traffic_model", to_json(model)},
                      {"totals", to_json(totals)}};
  if (!net.metadata.empty()) j["metadata"] = net.metadata;
  if (hw) {
    const auto p = effective_precision(hw->accel, bits);
    const auto accel = with_precision(*hw, p).accel;
    const auto sizing = size_pe_array(accel);
    j["sizing"] = to_json(sizing);
    j["bandwidth_bits"] = hw->mem.bandwidth();
    for (std::size_t i = 0; i < evaluated.layers.size(); ++i) {
      const auto point = raw_point(evaluated.layers[i], accel.frequency);
      const auto c = classify(point, sizing, hw->mem);
      auto& row = j["totals"]["layers"][i];
      row["required_ops"] = point.required_ops;
      row["classification"] = to_string(c.bound);
      row["borderline"] = c.borderline;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// JSON request resolution (API bodies)
// ---------------------------------------------------------------------------

namespace detail {

inline Network resolve_network(const nlohmann::json& req, const PresetStore& presets) {
  const auto& v = require(req, "network", "request");
  if (v.is_string()) return presets.network(v.get<std::string>());
  return network_from_json(v, "request.network");
}

inline HardwareConfig resolve_hardware(const nlohmann::json& req, const PresetStore& presets) {
  const auto& v = require(req, "hardware", "request");
  HardwareConfig hw;
  if (v.is_string()) {
    hw = presets.hardware_config(v.get<std::string>());
  } else if (v.is_object()) {
    auto doc = v;
    // Calibration by preset name only; no filesystem paths from the network.
    if (auto it = doc.find("calibration"); it != doc.end() && it->is_string()) {
      *it = to_json(presets.calibration(it->get<std::string>()));
    }
    hw = hardware_from_json(doc, "request.hardware");
  } else {
    throw ParseError("request.hardware: expected object or preset name");
  }
  if (req.contains("memory")) hw.mem = memory_from_json(req["memory"], "request.memory");
  return hw;
}

inline std::optional<Count> optional_bits(const nlohmann::json& req) {
  if (!req.contains("bits")) return std::nullopt;
  const auto b = get_dim(req["bits"], "request.bits");
  if (b > kMaxBitwidth) throw ValidationError(fmt::format("request.bits must be <= {}", kMaxBitwidth));
  return b;
}

inline ReportOptions report_options(const nlohmann::json& req) {
  ReportOptions opts;
  if (req.contains("array")) opts.array = array_from_json(req["array"], "request.array");
  if (req.contains("spill")) opts.spill = parse_spill_mode(get_string(req["spill"], "request.spill"));
  if (req.contains("borderline_tol")) {
    opts.borderline_tol = get_number(req["borderline_tol"], "request.borderline_tol");
    if (!(opts.borderline_tol >= 0.0)) throw ValidationError("borderline_tol must be >= 0");
  }
  return opts;
}

inline void require_object(const nlohmann::json& req) {
  if (!req.is_object()) throw ParseError("request body must be a JSON object");
}

}  // namespace detail

inline nlohmann::json handle_presets(const PresetStore& presets) {
  return {{"networks", presets.networks()},
          {"calibrations", presets.calibrations()},
          {"hardware", presets.hardware()}};
}

inline nlohmann::json handle_preset(const PresetStore& presets, std::string_view name) {
  if (presets.has("presets", name, ".json")) {
    return {{"type", "network"}, {"name", name}, {"document", to_json(presets.network(name))}};
  }
  if (presets.has("calibration", name, ".json")) {
    return {{"type", "calibration"},
            {"name", name},
            {"document", to_json(presets.calibration(name))}};
  }
  if (presets.has("hardware", name, ".toml")) {
    return {{"type", "hardware"},
            {"name", name},
            {"document", to_json(presets.hardware_config(name))}};
  }
  throw ValidationError(fmt::format("unknown preset '{}'", name));
}

// { network, hardware, memory?, array?, spill?, bits?, borderline_tol? } -> report
inline nlohmann::json handle_analyze(const nlohmann::json& req, const PresetStore& presets) {
  detail::require_object(req);
  detail::reject_unknown(
      req, {"network", "hardware", "memory", "array", "spill", "bits", "borderline_tol"}, "request");
  return analyze_roofline(detail::resolve_network(req, presets),
                          detail::resolve_hardware(req, presets), detail::report_options(req),
                          detail::optional_bits(req));
}

// { hardware, memory? } -> sizing
inline nlohmann::json handle_size(const nlohmann::json& req, const PresetStore& presets) {
  detail::require_object(req);
  detail::reject_unknown(req, {"hardware", "memory"}, "request");
  const auto hw = detail::resolve_hardware(req, presets);
  auto j = to_json(size_pe_array(hw.accel));
  j["bandwidth_bits"] = hw.mem.bandwidth();
  j["ridge_point"] = j["capacity_ops"].get<double>() / hw.mem.bandwidth();
  return j;
}

inline const Layer& select_layer(const Network& net, const nlohmann::json& selector) {
  if (selector.is_number_integer()) {
    const auto i = selector.get<std::int64_t>();
    if (i < 0 || static_cast<std::size_t>(i) >= net.layers.size()) {
      throw ValidationError(fmt::format("layer index {} out of range [0, {})", i, net.layers.size()));
    }
    return net.layers[static_cast<std::size_t>(i)];
  }
  const auto name = detail::get_string(selector, "layer");
  auto it = std::find_if(net.layers.begin(), net.layers.end(),
                         [&](const Layer& l) { return l.name == name; });
  if (it == net.layers.end()) {
    throw ValidationError(fmt::format("network '{}' has no layer '{}'", net.name, name));
  }
  return *it;
}

// { network, layer?, bus_bits, per_feature?, batch?, bits? } -> trace
inline nlohmann::json handle_timeline(const nlohmann::json& req, const PresetStore& presets) {
  using namespace detail;
  require_object(req);
  reject_unknown(req, {"network", "layer", "bus_bits", "per_feature", "batch", "bits"}, "request");
  const auto net = resolve_network(req, presets);
  Layer layer = select_layer(net, req.value("layer", nlohmann::json(0)));
  if (auto b = optional_bits(req)) layer = with_bits(layer, *b, *b);
  TimelineOptions opts;
  opts.bus_bits_per_cycle = get_dim(require(req, "bus_bits", "request"), "request.bus_bits");
  if (req.contains("per_feature")) {
    if (!req["per_feature"].is_boolean()) throw ParseError("request.per_feature: expected boolean");
    opts.per_feature = req["per_feature"].get<bool>();
  }
  if (req.contains("batch")) opts.batch = get_dim(req["batch"], "request.batch");
  auto j = to_json(simulate(layer, opts));
  j["layer"] = layer.name;
  return j;
}

// { network, area_mm2 | area_um2, b_w, b_a, k?, kind?, calibration?, memory?,
//   spill?, target_freq_mhz? } -> reverse design
inline nlohmann::json handle_reverse(const nlohmann::json& req, const PresetStore& presets) {
  using namespace detail;
  require_object(req);
  reject_unknown(req,
                 {"network", "area_mm2", "area_um2", "b_w", "b_a", "k", "kind", "calibration",
                  "memory", "spill", "target_freq_mhz"},
                 "request");
  const auto net = resolve_network(req, presets);
  ReverseDesignRequest r;
  const bool mm2 = req.contains("area_mm2");
  if (mm2 == req.contains("area_um2")) {
    throw ParseError("request: exactly one of area_mm2 or area_um2 is required");
  }
  r.area_budget = mm2 ? get_number(req["area_mm2"], "request.area_mm2") * 1e6
                      : get_number(req["area_um2"], "request.area_um2");
  r.b_w = get_dim(require(req, "b_w", "request"), "request.b_w");
  r.b_a = get_dim(require(req, "b_a", "request"), "request.b_a");
  if (r.b_w > kMaxBitwidth || r.b_a > kMaxBitwidth) {
    throw ValidationError(fmt::format("bitwidths must be in [1, {}]", kMaxBitwidth));
  }
  if (req.contains("k")) r.k = get_dim(req["k"], "request.k");
  if (req.contains("kind")) {
    const auto kind = get_string(req["kind"], "request.kind");
    if (kind == "float32") {
      r.kind = ArithmeticKind::float32;
    } else if (kind != "fixed") {
      throw ValidationError(fmt::format("request.kind: unknown kind '{}'", kind));
    }
  }
  if (req.contains("calibration")) {
    const auto& c = req["calibration"];
    r.profile = c.is_string() ? presets.calibration(c.get<std::string>())
                              : calibration_from_json(c, "request.calibration");
  }
  if (req.contains("memory")) r.mem = memory_from_json(req["memory"], "request.memory");
  if (req.contains("spill")) r.spill = parse_spill_mode(get_string(req["spill"], "request.spill"));
  if (req.contains("target_freq_mhz")) {
    r.target_frequency = get_number(req["target_freq_mhz"], "request.target_freq_mhz") * 1e6;
  }
  return to_json(reverse_design(net, r));
}

}  // namespace qroof
