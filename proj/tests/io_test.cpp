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

#include <gtest/gtest.h>

#include <filesystem>
#include <regex>

#include "qroof/csv_io.hpp"
#include "qroof/hardware_config.hpp"
#include "qroof/report_io.hpp"
#include "qroof/svg.hpp"
#include "qroof/toml_lite.hpp"
#include "test_util.hpp"

namespace qroof {
namespace {

const std::filesystem::path kData = QROOF_DATA_DIR;

// ---------------------------------------------------------------------------
// TOML subset
// ---------------------------------------------------------------------------

TEST(TomlLite, ScalarsArraysAndTables) {
  const auto j = toml_lite::parse(R"(# comment
name = "ex \"one\""   # trailing comment
count = 42
neg = -7
ratio = 0.5
exp = 1e3
flag = true
off = false
dims = [16, 16]
nested = [[1, 2], ["a"]]
mem = { rate = 2400, width = 64 }

[extra]
key = "v"

[a.b]
c = 1
)");
  EXPECT_EQ(j["name"], "ex \"one\"");
  EXPECT_EQ(j["count"], 42);
  EXPECT_TRUE(j["count"].is_number_integer());
  EXPECT_EQ(j["neg"], -7);
  EXPECT_DOUBLE_EQ(j["ratio"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["exp"].get<double>(), 1000.0);
  EXPECT_EQ(j["flag"], true);
  EXPECT_EQ(j["off"], false);
  EXPECT_EQ(j["dims"], nlohmann::json::array({16, 16}));
  EXPECT_EQ(j["nested"][1][0], "a");
  EXPECT_EQ(j["mem"]["width"], 64);
  EXPECT_EQ(j["extra"]["key"], "v");
  EXPECT_EQ(j["a"]["b"]["c"], 1);
}

TEST(TomlLite, MultiLineArray) {
  const auto j = toml_lite::parse("xs = [\n  1,\n  2, # two\n  3,\n]\n");
  EXPECT_EQ(j["xs"], nlohmann::json::array({1, 2, 3}));
}

TEST(TomlLite, ErrorsNameTheLine) {
  for (const char* bad : {"a = 1\nb = \n", "a = 1\nb = \"open\n", "a = 1\na = 2\n",
                          "a = 1\nb = [1 2]\n", "a = 1\nb = nope\n", "a = 1\nb = 2 c\n"}) {
    try {
      toml_lite::parse(bad, "hw.toml");
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("hw.toml: line 2"), std::string::npos) << e.what();
    }
  }
}

// ---------------------------------------------------------------------------
// Hardware descriptions
// ---------------------------------------------------------------------------

TEST(Hardware, ShippedExampleOneFiles) {
  const auto hw = load_hardware(kData / "hardware/ex1-8bit.toml");
  EXPECT_DOUBLE_EQ(hw.accel.area_budget, 1e6);
  EXPECT_DOUBLE_EQ(hw.accel.frequency, 800e6);
  EXPECT_EQ(hw.accel.kind, ArithmeticKind::fixed);
  EXPECT_EQ(hw.accel.b_w, 8u);
  EXPECT_EQ(hw.accel.k, 3u);
  EXPECT_DOUBLE_EQ(hw.mem.bandwidth(), 153.6e9);
  EXPECT_EQ(hw.accel.profile.name, "tsmc28");

  const auto f = load_hardware(kData / "hardware/ex1-float32.toml");
  EXPECT_EQ(f.accel.kind, ArithmeticKind::float32);
  EXPECT_EQ(f.accel.b_w, 32u);
}

TEST(Hardware, AllShippedFilesLoad) {
  std::size_t count = 0;
  for (const auto& e : std::filesystem::directory_iterator(kData / "hardware")) {
    EXPECT_NO_THROW(load_hardware(e.path())) << e.path();
    ++count;
  }
  EXPECT_GE(count, 10u);
}

TEST(Hardware, ArrayPreset) {
  const auto hw = load_hardware(kData / "hardware/resnet18-16x16.toml");
  ASSERT_TRUE(hw.accel.explicit_array.has_value());
  EXPECT_EQ(*hw.accel.explicit_array, (ArrayDims{16, 16}));
}

TEST(Hardware, JsonAndTomlAgree) {
  const auto toml = parse_hardware(R"(
area_um2 = 6000000
freq_mhz = 100
b_w = 4
b_a = 4
[mem]
transfer_rate_mhz = 2400
bus_width_bits = 32
derating = 0.8
)",
                                   "t");
  const auto json = parse_hardware(R"({"area_um2": 6e6, "freq_mhz": 100, "b_w": 4, "b_a": 4,
      "mem": {"transfer_rate_mhz": 2400, "bus_width_bits": 32, "derating": 0.8}})",
                                   "j");
  EXPECT_DOUBLE_EQ(toml.accel.area_budget, json.accel.area_budget);
  EXPECT_DOUBLE_EQ(toml.mem.bandwidth(), json.mem.bandwidth());
  EXPECT_DOUBLE_EQ(toml.mem.bandwidth(), 2.4e9 * 32 * 0.8);
}

TEST(Hardware, AreaUnitsAreExclusive) {
  EXPECT_THROW(parse_hardware("freq_mhz = 100\n", "x"), ParseError);
  EXPECT_THROW(parse_hardware("area_mm2 = 1\narea_um2 = 1e6\nfreq_mhz = 100\n", "x"), ParseError);
}

TEST(Hardware, RejectsBadValues) {
  EXPECT_THROW(parse_hardware("area_mm2 = 1\nfreq_mhz = 100\nkind = \"bf16\"\n", "x"),
               ValidationError);
  EXPECT_THROW(parse_hardware("area_mm2 = 1\nfreq_mhz = 100\nb_w = 0\n", "x"), ValidationError);
  EXPECT_THROW(parse_hardware("area_mm2 = 1\nfreq_mhz = 0\n", "x"), ValidationError);
  EXPECT_THROW(parse_hardware("area_mm2 = 1\nfreq_mhz = 100\narray = [16]\n", "x"), ParseError);
  EXPECT_THROW(parse_hardware("area_mm2 = 1\nfreq_mhz = 100\nspeed = 3\n", "x"), ParseError);
  EXPECT_THROW(
      parse_hardware("area_mm2 = 1\nfreq_mhz = 100\nmem = { transfer_rate_mhz = 2400 }\n", "x"),
      ParseError);
}

TEST(Hardware, InlineCalibration) {
  auto cal = to_json(default_calibration());
  cal["name"] = "custom";
  cal["overrides"] = {{"8", 1000.0}};
  nlohmann::json j = {{"area_mm2", 1}, {"freq_mhz", 800}, {"calibration", cal}};
  const auto hw = hardware_from_json(j);
  EXPECT_EQ(hw.accel.profile.name, "custom");
  EXPECT_DOUBLE_EQ(pe_area(hw.accel), 1000.0);
}

TEST(Hardware, MissingCalibrationFile) {
  EXPECT_THROW(parse_hardware("area_mm2 = 1\nfreq_mhz = 1\ncalibration = \"nope.json\"\n", "x",
                              "/nonexistent"),
               ParseError);
}

TEST(Hardware, JsonRoundTrip) {
  const auto hw = load_hardware(kData / "hardware/resnet18-16x16.toml");
  const auto again = hardware_from_json(to_json(hw));
  EXPECT_DOUBLE_EQ(again.accel.area_budget, hw.accel.area_budget);
  EXPECT_DOUBLE_EQ(again.accel.frequency, hw.accel.frequency);
  EXPECT_EQ(again.accel.explicit_array, hw.accel.explicit_array);
  EXPECT_DOUBLE_EQ(again.mem.bandwidth(), hw.mem.bandwidth());
  EXPECT_EQ(again.accel.profile.name, hw.accel.profile.name);
}

// ---------------------------------------------------------------------------
// CSV inputs
// ---------------------------------------------------------------------------

TEST(Csv, Points) {
  const auto pts = parse_points_csv("x,y\n# note\n1, 2.5\n\n3,4e2\r\n");
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_DOUBLE_EQ(pts[1].y, 400.0);
}

TEST(Csv, Samples) {
  const auto s = parse_samples_csv("n,m,k,b_w,b_a,area\n4,4,3,8,8,12345.5\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].config.n, 4u);
  EXPECT_EQ(s[0].config.b_a, 8u);
  EXPECT_DOUBLE_EQ(s[0].area, 12345.5);
}

TEST(Csv, Errors) {
  EXPECT_THROW(parse_points_csv("a,b\n1,2\n"), ParseError);
  EXPECT_THROW(parse_points_csv("x,y\n1\n"), ParseError);
  EXPECT_THROW(parse_points_csv("x,y\n1,abc\n"), ParseError);
  EXPECT_THROW(parse_points_csv(""), ParseError);
  EXPECT_THROW(parse_samples_csv("n,m,k,b_w,b_a,area\n-1,4,3,8,8,1\n"), ParseError);
  EXPECT_THROW(parse_samples_csv("n,m,k,b_w,b_a,area\n0,4,3,8,8,1\n"), ValidationError);
  try {
    parse_points_csv("x,y\n1,2\n3,zz\n", "pts.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("pts.csv: line 3"), std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

RooflineReport example_two_report() {
  AcceleratorConfig a;
  a.area_budget = 6e6;
  a.frequency = 100e6;
  a.b_w = a.b_a = 8;
  return build_report(Network{"l2", {testing::layer2(8)}}, a, ddr4_2400_x64());
}

TEST(ReportIo, JsonFields) {
  const auto j = to_json(example_two_report());
  EXPECT_EQ(j["network"], "l2");
  EXPECT_DOUBLE_EQ(j["compute_ceiling_ops"].get<double>(), 3969e9);
  EXPECT_DOUBLE_EQ(j["bandwidth_bits"].get<double>(), 153.6e9);
  ASSERT_EQ(j["points"].size(), 2u);
  EXPECT_EQ(j["points"][0]["variant"], "raw");
  EXPECT_EQ(j["points"][0]["classification"], "compute-bound");
  EXPECT_EQ(j["points"][0]["borderline"], true);
  EXPECT_EQ(j["points"][1]["variant"], "partial-sum");
  EXPECT_EQ(j["sizing"]["array_side"], 63);
}

TEST(ReportIo, CsvRows) {
  const auto csv = to_csv(example_two_report());
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "layer,variant,ops_per_bit,required_ops,classification,borderline");
  EXPECT_NE(csv.find("\nlayer2,raw,"), std::string::npos);
  EXPECT_NE(csv.find(",compute-bound,true\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(ReportIo, TimelineCsv) {
  const auto t = simulate(testing::make_layer(3, 4, 4, 8, 8, 8), 64);
  const auto csv = to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "cycle_start,cycle_end,bits_per_cycle,phase");
  EXPECT_NE(csv.find("\n0,30,64,prefetch\n"), std::string::npos);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            t.segments.size() + 1);
}

TEST(ReportIo, ReverseInfinityIsNull) {
  ReverseDesignResult r;
  r.max_frequency = std::numeric_limits<double>::infinity();
  const auto j = to_json(r);
  EXPECT_TRUE(j["max_frequency_hz"].is_null());
  EXPECT_NO_THROW((void)j.dump());
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

TEST(Svg, ContainsCeilingsRidgeAndDots) {
  const auto svg = render_roofline_svg(example_two_report());
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("class=\"memory-ceiling\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"compute-ceiling\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"ridge-point\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"point-raw\""), std::string::npos);
  EXPECT_NE(svg.find("fill=\"red\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"point-partial-sum\""), std::string::npos);
  EXPECT_NE(svg.find("fill=\"green\""), std::string::npos);
}

TEST(Svg, ComputeCeilingIsHorizontal) {
  const auto svg = render_roofline_svg(example_two_report());
  const std::regex re(
      "class=\"compute-ceiling\" x1=\"[0-9.]+\" y1=\"([0-9.]+)\" x2=\"[0-9.]+\" y2=\"([0-9.]+)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, re));
  EXPECT_EQ(m[1], m[2]);
}

TEST(Svg, EscapesLayerNames) {
  auto r = example_two_report();
  r.points[0].point.layer_name = "a<b&c";
  const auto svg = render_roofline_svg(r);
  EXPECT_NE(svg.find("a&lt;b&amp;c"), std::string::npos);
  EXPECT_EQ(svg.find("a<b"), std::string::npos);
}

TEST(Svg, Deterministic) {
  EXPECT_EQ(render_roofline_svg(example_two_report()), render_roofline_svg(example_two_report()));
}

}  // namespace
}  // namespace qroof
