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

// Hardware description files (TOML or JSON, same keys):
//
//   area_mm2 = 1.0          # or area_um2
//   freq_mhz = 800
//   kind = "fixed"          # or "float32"
//   b_w = 8
//   b_a = 8
//   k = 3
//   estimator = "quadratic-bitwidth"   # optional; or "linear-bops"
//   mem = { transfer_rate_mhz = 2400, bus_width_bits = 64, derating = 1.0 }
//   array = [16, 16]        # optional explicit PE array
//   calibration = "../calibration/tsmc28.json"   # optional, relative to this file

#include <filesystem>
#include <optional>
#include <string>

#include "qroof/hwmodel.hpp"
#include "qroof/roofline.hpp"
#include "qroof/toml_lite.hpp"

namespace qroof {

struct HardwareConfig {
  AcceleratorConfig accel;
  MemoryConfig mem = ddr4_2400_x64();
};

inline MemoryConfig memory_from_json(const nlohmann::json& j, std::string_view context = "mem") {
  using namespace detail;
  if (!j.is_object()) throw ParseError(fmt::format("{}: expected object", context));
  reject_unknown(j, {"transfer_rate_mhz", "bus_width_bits", "derating"}, context);
  MemoryConfig mem;
  mem.transfer_rate = get_number(require(j, "transfer_rate_mhz", context),
                                 fmt::format("{}.transfer_rate_mhz", context)) *
                      1e6;
  mem.bus_width =
      get_number(require(j, "bus_width_bits", context), fmt::format("{}.bus_width_bits", context));
  if (j.contains("derating")) {
    mem.derating = get_number(j["derating"], fmt::format("{}.derating", context));
  }
  validate(mem);
  return mem;
}

inline nlohmann::json to_json(const MemoryConfig& mem) {
  return {{"transfer_rate_mhz", mem.transfer_rate / 1e6},
          {"bus_width_bits", mem.bus_width},
          {"derating", mem.derating}};
}

inline ArrayDims array_from_json(const nlohmann::json& j, std::string_view context = "array") {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(fmt::format("{}: expected [rows, cols]", context));
  }
  return {detail::get_dim(j[0], fmt::format("{}[0]", context)),
          detail::get_dim(j[1], fmt::format("{}[1]", context))};
}

// `calibration` paths resolve against base_dir; an inline object is also
// accepted. Without the key the published default profile is used.
inline HardwareConfig hardware_from_json(const nlohmann::json& j,
                                         std::string_view source = "hardware",
                                         const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) throw ParseError(fmt::format("{}: expected object", source));
  reject_unknown(j,
                 {"area_mm2", "area_um2", "freq_mhz", "kind", "b_w", "b_a", "k", "estimator",
                  "mem", "array", "calibration", "name"},
                 source);
  auto ctx = [&](std::string_view key) { return fmt::format("{}.{}", source, key); };
  HardwareConfig hw;
  auto& a = hw.accel;
  const bool has_mm2 = j.contains("area_mm2");
  const bool has_um2 = j.contains("area_um2");
  if (has_mm2 == has_um2) {
    throw ParseError(fmt::format("{}: exactly one of area_mm2 or area_um2 is required", source));
  }
  a.area_budget = has_mm2 ? get_number(j["area_mm2"], ctx("area_mm2")) * 1e6
                          : get_number(j["area_um2"], ctx("area_um2"));
  a.frequency = get_number(require(j, "freq_mhz", source), ctx("freq_mhz")) * 1e6;
  if (j.contains("kind")) {
    const auto kind = get_string(j["kind"], ctx("kind"));
    if (kind == "float32") {
      a.kind = ArithmeticKind::float32;
      a.b_w = a.b_a = 32;
    } else if (kind == "fixed") {
      a.kind = ArithmeticKind::fixed;
    } else {
      throw ValidationError(fmt::format("{}: kind must be 'float32' or 'fixed', got '{}'",
                                        ctx("kind"), kind));
    }
  }
  if (j.contains("b_w")) a.b_w = get_dim(j["b_w"], ctx("b_w"));
  if (j.contains("b_a")) a.b_a = get_dim(j["b_a"], ctx("b_a"));
  if (j.contains("k")) a.k = get_dim(j["k"], ctx("k"));
  if (j.contains("estimator")) {
    const auto e = get_string(j["estimator"], ctx("estimator"));
    if (e == "quadratic-bitwidth") {
      a.estimator = AreaEstimator::quadratic_bitwidth;
    } else if (e == "linear-bops") {
      a.estimator = AreaEstimator::linear_bops;
    } else {
      throw ValidationError(fmt::format("{}: unknown estimator '{}'", ctx("estimator"), e));
    }
  }
  if (j.contains("array")) a.explicit_array = array_from_json(j["array"], ctx("array"));
  if (j.contains("mem")) hw.mem = memory_from_json(j["mem"], ctx("mem"));
  if (j.contains("calibration")) {
    const auto& cal = j["calibration"];
    if (cal.is_object()) {
      a.profile = calibration_from_json(cal, ctx("calibration"));
    } else {
      const std::filesystem::path p = get_string(cal, ctx("calibration"));
      a.profile = load_calibration(p.is_absolute() ? p : base_dir / p);
    }
  }
  validate(a);
  return hw;
}

inline nlohmann::json to_json(const HardwareConfig& hw) {
  const auto& a = hw.accel;
  nlohmann::json j = {{"area_um2", a.area_budget},
                      {"freq_mhz", a.frequency / 1e6},
                      {"kind", to_string(a.kind)},
                      {"b_w", a.b_w},
                      {"b_a", a.b_a},
                      {"k", a.k},
                      {"estimator", to_string(a.estimator)},
                      {"mem", to_json(hw.mem)},
                      {"calibration", to_json(a.profile)}};
  if (a.explicit_array) j["array"] = {a.explicit_array->rows, a.explicit_array->cols};
  return j;
}

inline HardwareConfig parse_hardware(std::string_view text, std::string_view source,
                                     const std::filesystem::path& base_dir = {}) {
  // JSON documents start with '{'; anything else is read as TOML.
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = first != std::string_view::npos && text[first] == '{';
  const auto j = is_json ? detail::parse_json_text(text, source) : toml_lite::parse(text, source);
  return hardware_from_json(j, source, base_dir);
}

inline HardwareConfig load_hardware(const std::filesystem::path& path) {
  return parse_hardware(detail::read_file(path), path.string(), path.parent_path());
}

}  // namespace qroof
