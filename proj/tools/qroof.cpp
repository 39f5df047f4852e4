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

// qroof: accelerator cost and roofline analysis from the command line.
//
// Exit codes: 0 ok, 1 input error, 2 infeasible design or environment error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qroof/csv_io.hpp"
#include "qroof/server.hpp"
#include "qroof/service.hpp"
#include "qroof/svg.hpp"

#ifndef QROOF_DATA_DIR
#define QROOF_DATA_DIR "data"
#endif

namespace {

using namespace qroof;

constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

enum class Format { table, csv, json, svg };

struct Output {
  bool json = false;
  bool csv = false;
  bool svg = false;
  std::string path;

  Format format(Format fallback = Format::table) const {
    if (json) return Format::json;
    if (csv) return Format::csv;
    if (svg) return Format::svg;
    return fallback;
  }

  void add_to(CLI::App* cmd, bool with_csv, bool with_svg) {
    auto* j = cmd->add_flag("--json", json, "Emit JSON");
    if (with_csv) cmd->add_flag("--csv", csv, "Emit CSV")->excludes(j);
    if (with_svg) cmd->add_flag("--svg", svg, "Emit an SVG roofline plot")->excludes(j);
    cmd->add_option("-o,--output", path, "Write to file instead of stdout");
  }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(fmt::format("cannot write '{}'", path));
    out << text;
  }
};

// A path on disk, or else a shipped preset of that name (with or without extension).
std::filesystem::path resolve_input(const std::string& arg, const std::filesystem::path& data_dir,
                                    std::string_view sub, std::string_view ext) {
  std::filesystem::path p(arg);
  if (std::filesystem::exists(p)) return p;
  auto preset = data_dir / sub / p.filename();
  if (std::filesystem::exists(preset)) return preset;
  preset = data_dir / sub / (p.filename().string() + std::string(ext));
  if (std::filesystem::exists(preset)) return preset;
  throw ParseError(fmt::format("cannot open '{}': no such file or preset", arg));
}

struct MemoryOverrides {
  std::optional<double> transfer_rate_mhz;
  std::optional<double> bus_width_bits;
  std::optional<double> derating;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--transfer-rate-mhz", transfer_rate_mhz, "Memory transfers per second, MHz");
    cmd->add_option("--bus-width-bits", bus_width_bits, "Memory bus width in bits");
    cmd->add_option("--derating", derating, "Bandwidth efficiency factor in (0, 1]");
  }

  MemoryConfig apply(MemoryConfig mem) const {
    if (transfer_rate_mhz) mem.transfer_rate = *transfer_rate_mhz * 1e6;
    if (bus_width_bits) mem.bus_width = *bus_width_bits;
    if (derating) mem.derating = *derating;
    validate(mem);
    return mem;
  }
};

ArrayDims to_array(const std::vector<Count>& dims) {
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1) {
    throw ValidationError("--array expects ROWS,COLS with both >= 1");
  }
  return {dims[0], dims[1]};
}

std::string sig3(double v) { return fmt::format("{:.4g}", v); }

std::string metrics_table(const nlohmann::json& j) {
  const bool with_hw = j.contains("sizing");
  std::string out = fmt::format("network: {}   traffic: {}\n", j["network"].get<std::string>(),
                                j["traffic_model"]["variant"].get<std::string>());
  if (with_hw) {
    const auto& s = j["sizing"];
    out += fmt::format("array: {}x{}   capacity: {} GOPS/s   bandwidth: {} Gbit/s\n",
                       s["array"][0].get<Count>(), s["array"][1].get<Count>(),
                       sig3(s["capacity_ops"].get<double>() / 1e9),
                       sig3(j["bandwidth_bits"].get<double>() / 1e9));
  }
  out += fmt::format("{:<12} {:>16} {:>18} {:>16} {:>14} {:>9}", "layer", "ops", "bops",
                     "compute_cost", "bits", "ops/bit");
  if (with_hw) out += fmt::format(" {:>14} {}", "req GOPS/s", "class");
  out += '\n';
  auto row = [&](const nlohmann::json& l, const std::string& name) {
    out += fmt::format("{:<12} {:>16} {:>18} {:>16} {:>14} {:>9.2f}", name, l["ops"].get<Count>(),
                       l["bops"].get<Count>(), l["compute_cost"].get<Count>(),
                       l["traffic"]["total_bits"].get<Count>(), l["ops_per_bit"].get<double>());
    if (with_hw && l.contains("classification")) {
      out += fmt::format(" {:>14} {}{}", sig3(l["required_ops"].get<double>() / 1e9),
                         l["classification"].get<std::string>(),
                         l["borderline"].get<bool>() ? " (borderline)" : "");
    }
    out += '\n';
  };
  for (const auto& l : j["totals"]["layers"]) row(l, l["name"].get<std::string>());
  row(j["totals"], "TOTAL");
  return out;
}

std::string report_table(const RooflineReport& r) {
  std::string out = fmt::format(
      "network: {}   array: {}x{}   compute ceiling: {} GOPS/s   bandwidth: {} Gbit/s   "
      "ridge: {:.2f} OPS/bit\n",
      r.network_name, r.sizing.array.rows, r.sizing.array.cols, sig3(r.compute_ceiling / 1e9),
      sig3(r.bandwidth / 1e9), r.ridge_point);
  out += fmt::format("{:<12} {:<12} {:>7} {:>9} {:>14} {:>14}  {}\n", "layer", "variant", "passes",
                     "ops/bit", "req GOPS/s", "mem GOPS/s", "class");
  for (const auto& p : r.points) {
    out += fmt::format("{:<12} {:<12} {:>7} {:>9.2f} {:>14} {:>14}  {}{}\n", p.point.layer_name,
                       to_string(p.point.variant), p.point.passes, p.point.ops_per_bit,
                       sig3(p.point.required_ops / 1e9),
                       sig3(p.classification.memory_ceiling / 1e9),
                       to_string(p.classification.bound),
                       p.classification.borderline ? " (borderline)" : "");
  }
  return out;
}

std::string sizing_table(const SizingResult& s, const AcceleratorConfig& a) {
  std::string out = fmt::format("kind: {}", to_string(a.kind));
  if (a.kind == ArithmeticKind::fixed) out += fmt::format("   bits: w{}/a{}", a.b_w, a.b_a);
  out += fmt::format("   area: {} um^2   freq: {} MHz   k: {}\n", a.area_budget,
                     a.frequency / 1e6, a.k);
  out += fmt::format("pe area:    {:.1f} um^2\n", s.pe_area);
  if (s.multiplier_count) out += fmt::format("multipliers: {}\n", s.multiplier_count);
  out += fmt::format("pe count:   {}\n", s.pe_count);
  out += fmt::format("array:      {}x{}\n", s.array.rows, s.array.cols);
  out += fmt::format("capacity:   {} GOPS/s\n", sig3(s.capacity / 1e9));
  out += fmt::format("est power:  {:.3f} mW\n", s.est_power);
  return out;
}

std::string fit_table(const FitResult& f) {
  std::string out = fmt::format("degree: {}\ncoefficients (highest first):", f.degree);
  for (double c : f.coefficients) out += fmt::format(" {:.6g}", c);
  out += fmt::format("\nR^2: {:.9f}\nmax relative error: {:.4f}\n", f.r_squared, f.max_rel_error);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qroof: area, power, capacity and roofline analysis for quantized CNN accelerators"};
  app.require_subcommand(1);
  std::string data_dir = QROOF_DATA_DIR;
  app.add_option("--data-dir", data_dir, "Directory with shipped presets")->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Per-layer ops, BOPS, compute cost and traffic");
  std::string an_network, an_hw, an_traffic = "single-pass";
  std::optional<Count> an_bits, an_gin, an_gout, an_acc;
  Output an_out;
  analyze->add_option("network", an_network, "Network JSON file or preset name")->required();
  analyze->add_option("--hw", an_hw, "Hardware description (TOML or JSON)");
  analyze->add_option("--bits", an_bits, "Override weight and activation bitwidth");
  analyze->add_option("--traffic", an_traffic, "single-pass | grouped-onchip | grouped-spill")
      ->capture_default_str();
  analyze->add_option("--group-in", an_gin, "Input-feature group size");
  analyze->add_option("--group-out", an_gout, "Output-feature group size");
  analyze->add_option("--acc-bits", an_acc, "Accumulator width override");
  an_out.add_to(analyze, false, false);

  // roofline
  auto* roofline = app.add_subcommand("roofline", "Place layers on the OPS-based roofline");
  std::string rf_network, rf_hw, rf_spill = "onchip";
  std::optional<Count> rf_bits;
  std::vector<Count> rf_array;
  double rf_tol = kDefaultBorderlineTol;
  MemoryOverrides rf_mem;
  Output rf_out;
  roofline->add_option("network", rf_network, "Network JSON file or preset name")->required();
  roofline->add_option("--hw", rf_hw, "Hardware description (TOML or JSON)")->required();
  roofline->add_option("--bits", rf_bits, "Override weight and activation bitwidth");
  roofline->add_option("--array", rf_array, "Partial-sum array ROWS,COLS")->delimiter(',');
  roofline->add_option("--spill", rf_spill, "onchip | spill")->capture_default_str();
  roofline->add_option("--borderline-tol", rf_tol, "Borderline fraction")->capture_default_str();
  rf_mem.add_to(roofline);
  rf_out.add_to(roofline, true, true);

  // size
  auto* size = app.add_subcommand("size", "Size a PE array under an area budget");
  std::string sz_hw, sz_cal;
  std::optional<double> sz_area_mm2, sz_area_um2, sz_freq_mhz;
  std::optional<Count> sz_bits;
  bool sz_float = false;
  bool sz_linear = false;
  Count sz_k = 3;
  Output sz_out;
  size->add_option("--hw", sz_hw, "Hardware description (TOML or JSON)");
  size->add_option("--area-mm2", sz_area_mm2, "Area budget, mm^2");
  size->add_option("--area-um2", sz_area_um2, "Area budget, um^2");
  size->add_option("--bits", sz_bits, "Fixed-point bitwidth (weights = activations)");
  size->add_flag("--float", sz_float, "32-bit floating-point PEs");
  size->add_option("--freq-mhz", sz_freq_mhz, "Clock frequency, MHz");
  size->add_option("--k", sz_k, "Kernel side")->capture_default_str();
  size->add_option("--calibration", sz_cal, "Calibration profile JSON");
  size->add_flag("--linear-bops", sz_linear, "Size with the linear area-vs-BOPS estimator");
  sz_out.add_to(size, false, false);

  // fit
  auto* fitcmd = app.add_subcommand("fit", "Least-squares fit of an x,y CSV");
  std::string fit_csv;
  int fit_degree = 2;
  Output fit_out;
  fitcmd->add_option("--csv", fit_csv, "CSV with header x,y")->required();
  fitcmd->add_option("--degree", fit_degree, "1 or 2")->capture_default_str();
  fit_out.add_to(fitcmd, false, false);

  // compare
  auto* compare = app.add_subcommand("compare", "BOPS vs compute cost as area predictors");
  std::string cmp_csv;
  Output cmp_out;
  compare->add_option("--csv", cmp_csv, "CSV with header n,m,k,b_w,b_a,area")->required();
  cmp_out.add_to(compare, false, false);

  // timeline
  auto* timeline = app.add_subcommand("timeline", "Per-cycle memory access trace of one layer");
  std::string tl_network, tl_layer = "0";
  Count tl_bus = 64, tl_batch = 1;
  bool tl_per_feature = true;
  std::optional<Count> tl_bits;
  Output tl_out;
  timeline->add_option("network", tl_network, "Network JSON file or preset name")->required();
  timeline->add_option("--layer", tl_layer, "Layer name or index")->capture_default_str();
  timeline->add_option("--bus-bits", tl_bus, "Bus bits per cycle")->capture_default_str();
  timeline->add_flag("--per-feature,!--no-per-feature", tl_per_feature,
                     "One new input value per cycle per input feature (default) or in total");
  timeline->add_option("--batch", tl_batch, "Weight-traffic divisor")->capture_default_str();
  timeline->add_option("--bits", tl_bits, "Override weight and activation bitwidth");
  tl_out.add_to(timeline, false, false);

  // reverse
  auto* reverse = app.add_subcommand("reverse", "Area -> array -> max frequency -> bandwidth");
  std::string rv_network, rv_cal, rv_spill = "onchip";
  std::optional<double> rv_area_mm2, rv_area_um2, rv_target_mhz;
  Count rv_bits = 8, rv_k = 3;
  MemoryOverrides rv_mem;
  Output rv_out;
  reverse->add_option("network", rv_network, "Network JSON file or preset name")->required();
  reverse->add_option("--area-mm2", rv_area_mm2, "Area budget, mm^2");
  reverse->add_option("--area-um2", rv_area_um2, "Area budget, um^2");
  reverse->add_option("--bits", rv_bits, "Weight and activation bitwidth")->capture_default_str();
  reverse->add_option("--k", rv_k, "Kernel side")->capture_default_str();
  reverse->add_option("--calibration", rv_cal, "Calibration profile JSON");
  reverse->add_option("--spill", rv_spill, "onchip | spill")->capture_default_str();
  reverse->add_option("--target-freq-mhz", rv_target_mhz, "Frequency for required bandwidth");
  rv_mem.add_to(reverse);
  rv_out.add_to(reverse, false, false);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the JSON API");
  int sv_port = 8080;
  std::string sv_host = "127.0.0.1", sv_static;
  serve->add_option("--port", sv_port, "TCP port")->capture_default_str();
  serve->add_option("--host", sv_host, "Bind address")->capture_default_str();
  serve->add_option("--static-dir", sv_static, "Serve static files (e.g. a web UI) from here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  const std::filesystem::path data(data_dir);
  try {
    if (*analyze) {
      const auto net = load_network(resolve_input(an_network, data, "presets", ".json"));
      TrafficModel model;
      model.variant = parse_traffic_variant(an_traffic);
      if (model.variant != TrafficVariant::single_pass) {
        if (!an_gin || !an_gout) {
          throw ValidationError("grouped traffic requires --group-in and --group-out");
        }
        model.group_in = *an_gin;
        model.group_out = *an_gout;
      }
      model.accumulator_bits = an_acc;
      std::optional<HardwareConfig> hw;
      if (!an_hw.empty()) hw = load_hardware(resolve_input(an_hw, data, "hardware", ".toml"));
      const auto j = analyze_network(net, model, hw, an_bits);
      an_out.write(an_out.format() == Format::json ? j.dump(2) + "\n" : metrics_table(j));
    } else if (*roofline) {
      const auto net = load_network(resolve_input(rf_network, data, "presets", ".json"));
      auto hw = load_hardware(resolve_input(rf_hw, data, "hardware", ".toml"));
      hw.mem = rf_mem.apply(hw.mem);
      ReportOptions opts;
      if (!rf_array.empty()) opts.array = to_array(rf_array);
      opts.spill = parse_spill_mode(rf_spill);
      opts.borderline_tol = rf_tol;
      const auto report = roofline_report(net, hw, opts, rf_bits);
      switch (rf_out.format()) {
        case Format::json: rf_out.write(to_json(report).dump(2) + "\n"); break;
        case Format::csv: rf_out.write(to_csv(report)); break;
        case Format::svg: rf_out.write(render_roofline_svg(report)); break;
        case Format::table: rf_out.write(report_table(report)); break;
      }
    } else if (*size) {
      AcceleratorConfig accel;
      if (!sz_hw.empty()) accel = load_hardware(resolve_input(sz_hw, data, "hardware", ".toml")).accel;
      if (sz_area_mm2 && sz_area_um2) throw ValidationError("give --area-mm2 or --area-um2, not both");
      if (sz_area_mm2) accel.area_budget = *sz_area_mm2 * 1e6;
      if (sz_area_um2) accel.area_budget = *sz_area_um2;
      if (sz_freq_mhz) accel.frequency = *sz_freq_mhz * 1e6;
      if (sz_float && sz_bits) throw ValidationError("give --bits or --float, not both");
      if (sz_float) {
        accel.kind = ArithmeticKind::float32;
        accel.b_w = accel.b_a = 32;
      }
      if (sz_bits) {
        accel.kind = ArithmeticKind::fixed;
        accel.b_w = accel.b_a = *sz_bits;
      }
      if (sz_hw.empty() || size->count("--k")) accel.k = sz_k;
      if (!sz_cal.empty()) accel.profile = load_calibration(resolve_input(sz_cal, data, "calibration", ".json"));
      if (sz_linear) accel.estimator = AreaEstimator::linear_bops;
      const auto s = size_pe_array(accel);
      sz_out.write(sz_out.format() == Format::json ? to_json(s).dump(2) + "\n"
                                                   : sizing_table(s, accel));
    } else if (*fitcmd) {
      const auto f = fit(load_points_csv(fit_csv), fit_degree);
      fit_out.write(fit_out.format() == Format::json ? to_json(f).dump(2) + "\n" : fit_table(f));
    } else if (*compare) {
      const auto c = compare_metrics(load_samples_csv(cmp_csv));
      if (cmp_out.format() == Format::json) {
        cmp_out.write(to_json(c).dump(2) + "\n");
      } else {
        cmp_out.write(fmt::format(
            "BOPS fit:         R^2 {:.6f}   max leave-one-out error {:.2f}%\n"
            "compute-cost fit: R^2 {:.6f}   max leave-one-out error {:.2f}%\n"
            "verdict: {}\n",
            c.bops_fit.r_squared, 100 * c.bops_max_loo_error, c.cc_fit.r_squared,
            100 * c.cc_max_loo_error, to_string(c.verdict)));
      }
    } else if (*timeline) {
      const auto net = load_network(resolve_input(tl_network, data, "presets", ".json"));
      nlohmann::json selector = tl_layer;
      if (!tl_layer.empty() && std::all_of(tl_layer.begin(), tl_layer.end(), ::isdigit) &&
          std::none_of(net.layers.begin(), net.layers.end(),
                       [&](const Layer& l) { return l.name == tl_layer; })) {
        selector = std::stoll(tl_layer);
      }
      Layer layer = select_layer(net, selector);
      if (tl_bits) layer = with_bits(layer, *tl_bits, *tl_bits);
      const auto trace = simulate(layer, TimelineOptions{tl_bus, tl_per_feature, tl_batch});
      tl_out.write(tl_out.format(Format::csv) == Format::json ? to_json(trace).dump(2) + "\n"
                                                              : to_csv(trace));
    } else if (*reverse) {
      const auto net = load_network(resolve_input(rv_network, data, "presets", ".json"));
      ReverseDesignRequest req;
      if (rv_area_mm2.has_value() == rv_area_um2.has_value()) {
        throw ValidationError("give exactly one of --area-mm2 or --area-um2");
      }
      req.area_budget = rv_area_mm2 ? *rv_area_mm2 * 1e6 : *rv_area_um2;
      req.b_w = req.b_a = rv_bits;
      req.k = rv_k;
      if (!rv_cal.empty()) req.profile = load_calibration(resolve_input(rv_cal, data, "calibration", ".json"));
      req.mem = rv_mem.apply(req.mem);
      req.spill = parse_spill_mode(rv_spill);
      if (rv_target_mhz) req.target_frequency = *rv_target_mhz * 1e6;
      const auto r = reverse_design(net, req);
      if (rv_out.format() == Format::json) {
        rv_out.write(to_json(r).dump(2) + "\n");
      } else {
        std::string out = fmt::format("array: {}x{} ({} PEs)\n", r.sizing.array.rows,
                                      r.sizing.array.cols, r.sizing.pe_count);
        out += r.memory_limited
                   ? fmt::format("max frequency: {:.2f} MHz (limited by layer '{}')\n",
                                 r.max_frequency / 1e6, r.limiting_layer)
                   : std::string("max frequency: unbounded by memory\n");
        out += fmt::format("required bandwidth at {:.2f} MHz: {} Gbit/s\n",
                           r.target_frequency / 1e6, sig3(r.required_bandwidth / 1e9));
        rv_out.write(out);
      }
    } else if (*serve) {
      auto presets = std::make_shared<const PresetStore>(data);
      httplib::Server svr;
      register_routes(svr, presets);
      if (!sv_static.empty() && !svr.set_mount_point("/", sv_static)) {
        std::cerr << fmt::format("error: static dir '{}' not found\n", sv_static);
        return kExitInput;
      }
      if (!svr.bind_to_port(sv_host, sv_port)) {
        std::cerr << fmt::format("error: cannot bind {}:{}\n", sv_host, sv_port);
        return kExitInfeasible;
      }
      std::cerr << fmt::format("serving on http://{}:{}\n", sv_host, sv_port);
      svr.listen_after_bind();
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
