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

// Calibrated silicon cost models: PE area vs. bitwidth or BOPS, PE-array
// sizing under an area budget, compute capacity and PE dynamic power.
//
// Areas are in um^2, frequencies in Hz, power in mW, capacity in ops/s.

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qroof/netmodel.hpp"
#include "qroof/network_io.hpp"

namespace qroof {

struct CalibrationProfile {
  std::string name;
  // Area = quad_a2 b^2 + quad_a1 b + quad_a0 for a single-channel PE.
  double quad_a2 = 0.0;
  double quad_a1 = 0.0;
  double quad_a0 = 0.0;
  // Area = lin_slope * BOPS + lin_intercept.
  double lin_slope = 0.0;
  double lin_intercept = 0.0;
  double fixed32_pe_area = 0.0;
  double float_mult_area = 0.0;
  double power_density = 0.0;  // mW per um^2, dynamic only
  std::map<Count, double> overrides;  // bitwidth -> PE area
};

inline double quadratic_area(const CalibrationProfile& p, double bits) {
  return p.quad_a2 * bits * bits + p.quad_a1 * bits + p.quad_a0;
}

inline void validate(const CalibrationProfile& p) {
  auto positive = [&](double v, std::string_view field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(
          fmt::format("calibration '{}': {} must be > 0, got {}", p.name, field, v));
    }
  };
  positive(p.fixed32_pe_area, "fixed32_pe_area");
  positive(p.float_mult_area, "float_mult_area");
  positive(p.power_density, "power_density");
  if (!(p.lin_slope >= 0.0)) {
    throw ValidationError(
        fmt::format("calibration '{}': lin slope must be >= 0, got {}", p.name, p.lin_slope));
  }
  for (Count b = 1; b <= 32; ++b) {
    if (!(quadratic_area(p, static_cast<double>(b)) > 0.0)) {
      throw ValidationError(fmt::format(
          "calibration '{}': quadratic area fit is not positive at b = {}", p.name, b));
    }
  }
  for (const auto& [bits, area] : p.overrides) {
    positive(area, fmt::format("overrides[{}]", bits));
  }
}

inline CalibrationProfile calibration_from_json(const nlohmann::json& j,
                                                std::string_view source = "calibration") {
  using namespace detail;
  if (!j.is_object()) throw ParseError(fmt::format("{}: expected a JSON object", source));
  reject_unknown(j,
                 {"name", "quad", "lin", "fixed32_pe_area", "float_mult_area", "power_density",
                  "overrides", "notes"},
                 source);
  auto coeffs = [&](std::string_view key, std::size_t count) {
    const auto& v = require(j, key, source);
    if (!v.is_array() || v.size() != count) {
      throw ParseError(fmt::format("{}.{}: expected array of {} numbers", source, key, count));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(get_number(v[i], fmt::format("{}.{}[{}]", source, key, i)));
    }
    return out;
  };
  auto number = [&](std::string_view key) {
    return get_number(require(j, key, source), fmt::format("{}.{}", source, key));
  };

  CalibrationProfile p;
  p.name = get_string(require(j, "name", source), fmt::format("{}.name", source));
  const auto quad = coeffs("quad", 3);
  p.quad_a2 = quad[0];
  p.quad_a1 = quad[1];
  p.quad_a0 = quad[2];
  const auto lin = coeffs("lin", 2);
  p.lin_slope = lin[0];
  p.lin_intercept = lin[1];
  p.fixed32_pe_area = number("fixed32_pe_area");
  p.float_mult_area = number("float_mult_area");
  p.power_density = number("power_density");
  if (auto it = j.find("overrides"); it != j.end()) {
    if (!it->is_object()) throw ParseError(fmt::format("{}.overrides: expected object", source));
    for (const auto& [key, value] : it->items()) {
      std::size_t pos = 0;
      unsigned long bits = 0;
      try {
        bits = std::stoul(key, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != key.size() || bits < 1 || bits > kMaxBitwidth) {
        throw ParseError(
            fmt::format("{}.overrides: key '{}' is not a bitwidth in [1, 64]", source, key));
      }
      p.overrides[bits] = get_number(value, fmt::format("{}.overrides.{}", source, key));
    }
  }
  validate(p);
  return p;
}

inline nlohmann::json to_json(const CalibrationProfile& p) {
  nlohmann::json overrides = nlohmann::json::object();
  for (const auto& [bits, area] : p.overrides) overrides[std::to_string(bits)] = area;
  nlohmann::json j = {{"name", p.name},
                      {"quad", {p.quad_a2, p.quad_a1, p.quad_a0}},
                      {"lin", {p.lin_slope, p.lin_intercept}},
                      {"fixed32_pe_area", p.fixed32_pe_area},
                      {"float_mult_area", p.float_mult_area},
                      {"power_density", p.power_density}};
  if (!overrides.empty()) j["overrides"] = std::move(overrides);
  return j;
}

inline CalibrationProfile load_calibration(const std::filesystem::path& path) {
  return calibration_from_json(detail::parse_json_text(detail::read_file(path), path.string()),
                               path.string());
}

// Published TSMC 28nm constants, usable without the data file.
inline CalibrationProfile default_calibration() {
  CalibrationProfile p;
  p.name = "tsmc28";
  p.quad_a2 = 12.39;
  p.quad_a1 = 86.07;
  p.quad_a0 = -14.02;
  p.lin_slope = 1.694;
  p.lin_intercept = 153.46;
  p.fixed32_pe_area = 16676.0;
  p.float_mult_area = 11786.0;
  p.power_density = 1.053 / 1489.0;
  return p;
}

// ---------------------------------------------------------------------------
// Accelerator configuration
// ---------------------------------------------------------------------------

enum class ArithmeticKind { float32, fixed };
enum class AreaEstimator { quadratic_bitwidth, linear_bops };

constexpr std::string_view to_string(ArithmeticKind k) {
  return k == ArithmeticKind::float32 ? "float32" : "fixed";
}

constexpr std::string_view to_string(AreaEstimator e) {
  return e == AreaEstimator::quadratic_bitwidth ? "quadratic-bitwidth" : "linear-bops";
}

struct ArrayDims {
  Count rows = 1;  // input-feature groups
  Count cols = 1;  // output-feature groups
  bool operator==(const ArrayDims&) const = default;
};

struct AcceleratorConfig {
  double area_budget = 0.0;  // um^2
  double frequency = 0.0;    // Hz
  ArithmeticKind kind = ArithmeticKind::fixed;
  Count b_w = 8;
  Count b_a = 8;
  Count k = 3;
  CalibrationProfile profile = default_calibration();
  AreaEstimator estimator = AreaEstimator::quadratic_bitwidth;
  std::optional<ArrayDims> explicit_array;
};

inline void validate(const AcceleratorConfig& c) {
  if (!(c.area_budget > 0.0) || !std::isfinite(c.area_budget)) {
    throw ValidationError(fmt::format("area_budget must be > 0, got {}", c.area_budget));
  }
  if (!(c.frequency > 0.0) || !std::isfinite(c.frequency)) {
    throw ValidationError(fmt::format("frequency must be > 0, got {}", c.frequency));
  }
  if (c.k < 1) throw ValidationError("k must be >= 1");
  for (auto [v, field] : {std::pair{c.b_w, "b_w"}, std::pair{c.b_a, "b_a"}}) {
    if (v < 1 || v > kMaxBitwidth) {
      throw ValidationError(fmt::format("{} must be in [1, {}], got {}", field, kMaxBitwidth, v));
    }
  }
  if (c.explicit_array && (c.explicit_array->rows < 1 || c.explicit_array->cols < 1)) {
    throw ValidationError("explicit array dims must be >= 1");
  }
}

// BOPS of a single-channel k x k PE (n = m = 1).
inline Count single_pe_bops(Count k, Count b_w, Count b_a) {
  return detail::mul(k, k, b_a * b_w + b_a + b_w + ceil_log2(k * k));
}

inline double pe_area(const AcceleratorConfig& c, AreaEstimator estimator) {
  const auto& p = c.profile;
  if (c.kind == ArithmeticKind::float32) {
    // Multipliers only; accumulators are not counted.
    return static_cast<double>(c.k * c.k) * p.float_mult_area;
  }
  if (estimator == AreaEstimator::linear_bops) {
    return p.lin_slope * static_cast<double>(single_pe_bops(c.k, c.b_w, c.b_a)) + p.lin_intercept;
  }
  if (c.b_w != c.b_a) {
    throw ValidationError(fmt::format(
        "quadratic-bitwidth estimator needs b_w == b_a (got {} and {})", c.b_w, c.b_a));
  }
  const Count b = c.b_w;
  if (auto it = p.overrides.find(b); it != p.overrides.end()) return it->second;
  if (b == 32) return p.fixed32_pe_area;
  return quadratic_area(p, static_cast<double>(b));
}

inline double pe_area(const AcceleratorConfig& c) { return pe_area(c, c.estimator); }

// PE dynamic power, linear in area.
inline double estimate_power(double area, const CalibrationProfile& profile) {
  if (!(area > 0.0)) throw ValidationError(fmt::format("area must be > 0, got {}", area));
  return area * profile.power_density;
}

struct SizingResult {
  double pe_area = 0.0;  // um^2
  Count pe_count = 0;
  Count array_side = 0;
  ArrayDims array;            // rows x cols actually used
  Count multiplier_count = 0;  // float32 only
  double capacity = 0.0;       // ops/s
  double est_power = 0.0;      // mW, active PEs
};

inline SizingResult size_pe_array(const AcceleratorConfig& c) {
  validate(c);
  SizingResult r;
  r.pe_area = pe_area(c);
  if (c.explicit_array) {
    r.array = *c.explicit_array;
    r.pe_count = detail::mul(r.array.rows, r.array.cols);
    r.array_side = std::min(r.array.rows, r.array.cols);
  } else {
    if (c.kind == ArithmeticKind::float32) {
      r.multiplier_count = static_cast<Count>(std::floor(c.area_budget / c.profile.float_mult_area));
      r.pe_count = r.multiplier_count / (c.k * c.k);
    } else {
      r.pe_count = static_cast<Count>(std::floor(c.area_budget / r.pe_area));
    }
    if (r.pe_count == 0) {
      throw InfeasibleError(fmt::format(
          "area budget {} um^2 is below one PE ({} um^2)", c.area_budget, r.pe_area));
    }
    r.array_side = static_cast<Count>(std::sqrt(static_cast<double>(r.pe_count)));
    while (r.array_side * r.array_side > r.pe_count) --r.array_side;
    while ((r.array_side + 1) * (r.array_side + 1) <= r.pe_count) ++r.array_side;
    r.array = {r.array_side, r.array_side};
  }
  const Count active = r.array.rows * r.array.cols;
  r.capacity = static_cast<double>(active * (c.k * c.k + 1)) * c.frequency;
  r.est_power = estimate_power(r.pe_area * static_cast<double>(active), c.profile);
  return r;
}

// Area of an n x m array of k x k PEs, linear in its BOPS.
inline double estimate_accelerator_area(Count n, Count m, Count k, Count b_w, Count b_a,
                                        const CalibrationProfile& profile) {
  if (n < 1 || m < 1 || k < 1 || b_w < 1 || b_a < 1) {
    throw ValidationError("estimate_accelerator_area: all arguments must be >= 1");
  }
  Layer l;
  l.n = n;
  l.m = m;
  l.k = k;
  l.b_w = b_w;
  l.b_a = b_a;
  return profile.lin_slope * static_cast<double>(layer_bops(l)) + profile.lin_intercept;
}

}  // namespace qroof
