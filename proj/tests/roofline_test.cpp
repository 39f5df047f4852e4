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

#include "qroof/roofline.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "qroof/network_io.hpp"
#include "test_util.hpp"

namespace qroof {
namespace {

using testing::layer11;
using testing::layer2;

AcceleratorConfig accel(double area_um2, double freq_hz, Count bits, bool is_float = false) {
  AcceleratorConfig c;
  c.area_budget = area_um2;
  c.frequency = freq_hz;
  c.kind = is_float ? ArithmeticKind::float32 : ArithmeticKind::fixed;
  c.b_w = c.b_a = bits;
  return c;
}

TEST(MemoryConfig, Ddr4Bandwidth) {
  EXPECT_DOUBLE_EQ(ddr4_2400_x64().bandwidth(), 153.6e9);
  MemoryConfig m = ddr4_2400_x64();
  m.derating = 0.5;
  EXPECT_DOUBLE_EQ(m.bandwidth(), 76.8e9);
}

TEST(MemoryConfig, Validation) {
  EXPECT_THROW(validate(MemoryConfig{0, 64, 1}), ValidationError);
  EXPECT_THROW(validate(MemoryConfig{1e9, 0, 1}), ValidationError);
  EXPECT_THROW(validate(MemoryConfig{1e9, 64, 0}), ValidationError);
  EXPECT_THROW(validate(MemoryConfig{1e9, 64, 1.5}), ValidationError);
  EXPECT_NO_THROW(validate(ddr4_2400_x64()));
}

TEST(RequiredOps, Examples) {
  EXPECT_DOUBLE_EQ(layer_required_ops(layer11(8), 800e6), 524.288e12);
  EXPECT_DOUBLE_EQ(layer_required_ops(layer2(8), 100e6), 4.096e12);
  EXPECT_THROW(layer_required_ops(layer2(8), 0.0), ValidationError);
  EXPECT_THROW(layer_required_ops(layer2(8), -1.0), ValidationError);
}

TEST(Classify, Layer11OnEightBitExampleOne) {
  const auto sizing = size_pe_array(accel(1e6, 800e6, 8));
  const auto c = classify(raw_point(layer11(8), 800e6), sizing, ddr4_2400_x64());
  EXPECT_EQ(c.bound, Bound::compute_and_memory_bound);
  EXPECT_TRUE(c.compute_bound);
  EXPECT_TRUE(c.memory_bound);
  EXPECT_FALSE(c.borderline);
  EXPECT_NEAR(c.memory_ceiling / 1e9, 3573, 1);
}

TEST(Classify, Layer2ExampleTwo) {
  const auto mem = ddr4_2400_x64();
  const auto c8 = classify(raw_point(layer2(8), 100e6), size_pe_array(accel(6e6, 100e6, 8)), mem);
  EXPECT_EQ(c8.bound, Bound::compute_bound);
  EXPECT_TRUE(c8.borderline);

  const auto c4 = classify(raw_point(layer2(4), 100e6), size_pe_array(accel(6e6, 100e6, 4)), mem);
  EXPECT_EQ(c4.bound, Bound::feasible);
  EXPECT_FALSE(c4.borderline);
  EXPECT_NEAR(c4.memory_ceiling / 1e9, 11254, 1);

  for (Count bits : {32u, 16u}) {
    const auto c =
        classify(raw_point(layer2(bits), 100e6), size_pe_array(accel(6e6, 100e6, bits)), mem);
    EXPECT_TRUE(c.compute_bound) << bits;
    EXPECT_FALSE(c.borderline) << bits;
  }
}

TEST(Classify, BorderlineToleranceConfigurable) {
  RooflinePoint p{"x", 100.0, 1.04e12, PointVariant::raw, 1};
  EXPECT_TRUE(classify(p, 1e12, 1e12).borderline);
  EXPECT_FALSE(classify(p, 1e12, 1e12, 0.03).borderline);
  RooflinePoint below{"y", 100.0, 0.97e12, PointVariant::raw, 1};
  const auto c = classify(below, 1e12, 1e12);
  EXPECT_TRUE(c.borderline);
  EXPECT_EQ(c.bound, Bound::feasible);
}

TEST(Classify, MemoryOnly) {
  RooflinePoint p{"x", 1.0, 5e11, PointVariant::raw, 1};
  EXPECT_EQ(classify(p, 1e12, 1e11).bound, Bound::memory_bound);
}

TEST(Classify, MonotoneInCeilings) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    RooflinePoint p{"x", 0.1 + 100 * u(rng), 1e9 + 1e13 * u(rng), PointVariant::raw, 1};
    const double cap = 1e9 + 1e13 * u(rng);
    const double bw = 1e9 + 1e12 * u(rng);
    const auto base = classify(p, cap, bw);
    const auto more_bw = classify(p, cap, bw * (1 + u(rng)));
    const auto more_cap = classify(p, cap * (1 + u(rng)), bw);
    if (!base.memory_bound) {
      EXPECT_FALSE(more_bw.memory_bound);
    }
    if (!base.compute_bound) {
      EXPECT_FALSE(more_cap.compute_bound);
    }
  }
}

TEST(PartialSum, Layer11FullyUtilisesSixteenBySixteen) {
  const auto p = partial_sum_transform(layer11(4), {16, 16}, 800e6, SpillMode::onchip);
  EXPECT_EQ(p.passes, 256u);
  EXPECT_EQ(p.variant, PointVariant::partial_sum);
  auto c = accel(1e6, 800e6, 4);
  c.explicit_array = ArrayDims{16, 16};
  EXPECT_DOUBLE_EQ(size_pe_array(c).capacity, 2048e9);
  EXPECT_DOUBLE_EQ(p.required_ops, 2048e9);
}

TEST(PartialSum, OnchipOpsPerBitLayer11FourBit) {
  // 128,450,560 / (2,359,296 + 16 * 200,704 + 200,704)
  const auto p = partial_sum_transform(layer11(4), {16, 16}, 800e6, SpillMode::onchip);
  EXPECT_NEAR(p.ops_per_bit, 22.26, 0.005);
  EXPECT_DOUBLE_EQ(p.ops_per_bit, 128'450'560.0 / 5'771'264.0);
}

TEST(PartialSum, FullArrayIsRawPoint) {
  for (auto spill : {SpillMode::onchip, SpillMode::spill}) {
    const auto l = layer2(8);
    const auto p = partial_sum_transform(l, {l.n, l.m}, 100e6, spill);
    const auto r = raw_point(l, 100e6);
    EXPECT_EQ(p.passes, 1u);
    EXPECT_DOUBLE_EQ(p.required_ops, r.required_ops);
    EXPECT_DOUBLE_EQ(p.ops_per_bit, r.ops_per_bit);
  }
}

TEST(PartialSum, NonDivisibleFeaturesRoundUp) {
  auto l = testing::make_layer(3, 20, 33, 8, 8, 8);
  EXPECT_EQ(partial_sum_passes(l, {16, 16}), 2u * 3u);
}

TEST(PartialSum, DividesRequiredOpsAndNeverRaisesDensity) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto l = testing::random_layer(rng);
    const ArrayDims a{std::uniform_int_distribution<Count>(1, 40)(rng),
                      std::uniform_int_distribution<Count>(1, 40)(rng)};
    const auto raw = raw_point(l, 250e6);
    for (auto spill : {SpillMode::onchip, SpillMode::spill}) {
      const auto p = partial_sum_transform(l, a, 250e6, spill);
      EXPECT_DOUBLE_EQ(p.required_ops * static_cast<double>(p.passes), raw.required_ops);
      EXPECT_LE(p.ops_per_bit, raw.ops_per_bit);
    }
  }
}

TEST(PartialSum, RejectsZeroArray) {
  EXPECT_THROW(partial_sum_transform(layer2(8), {0, 4}, 1e8, SpillMode::onchip), ValidationError);
}

TEST(SpillMode, Parse) {
  EXPECT_EQ(parse_spill_mode("onchip"), SpillMode::onchip);
  EXPECT_EQ(parse_spill_mode("grouped-spill"), SpillMode::spill);
  EXPECT_THROW(parse_spill_mode("dram"), ValidationError);
}

TEST(BuildReport, Layer2ExampleTwoIsBorderlineComputeBound) {
  const auto r = build_report(Network{"l2", {layer2(8)}}, accel(6e6, 100e6, 8), ddr4_2400_x64());
  ASSERT_EQ(r.points.size(), 2u);
  EXPECT_DOUBLE_EQ(r.compute_ceiling, 3969e9);
  EXPECT_EQ(r.points[0].point.variant, PointVariant::raw);
  EXPECT_EQ(r.points[0].classification.bound, Bound::compute_bound);
  EXPECT_TRUE(r.points[0].classification.borderline);
  EXPECT_EQ(r.points[1].point.variant, PointVariant::partial_sum);
  EXPECT_EQ(r.partial_sum_array, (ArrayDims{63, 63}));
}

TEST(BuildReport, RidgeIdentityAndStoredFieldsReclassify) {
  auto a = accel(1e6, 800e6, 4);
  a.explicit_array = ArrayDims{16, 16};
  const auto net = with_bits(load_network(QROOF_DATA_DIR "/presets/resnet18.json"), 4, 4);
  const auto r = build_report(net, a, ddr4_2400_x64(), {std::nullopt, SpillMode::spill, 0.05});
  EXPECT_DOUBLE_EQ(r.ridge_point * r.bandwidth, r.compute_ceiling);
  ASSERT_EQ(r.points.size(), 2 * net.layers.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& rp = r.points[i];
    EXPECT_EQ(rp.point.layer_name, net.layers[i / 2].name);
    const auto again = classify(rp.point, r.compute_ceiling, r.bandwidth, r.borderline_tol);
    EXPECT_EQ(again.bound, rp.classification.bound);
    EXPECT_EQ(again.borderline, rp.classification.borderline);
  }
}

TEST(BuildReport, Deterministic) {
  const auto net = load_network(QROOF_DATA_DIR "/presets/resnet18.json");
  auto a = accel(1e6, 800e6, 4);
  a.explicit_array = ArrayDims{16, 16};
  const auto r1 = build_report(net, a, ddr4_2400_x64());
  const auto r2 = build_report(net, a, ddr4_2400_x64());
  ASSERT_EQ(r1.points.size(), r2.points.size());
  for (std::size_t i = 0; i < r1.points.size(); ++i) {
    EXPECT_EQ(r1.points[i].point.ops_per_bit, r2.points[i].point.ops_per_bit);
    EXPECT_EQ(r1.points[i].point.required_ops, r2.points[i].point.required_ops);
    EXPECT_EQ(r1.points[i].classification.bound, r2.points[i].classification.bound);
  }
}

TEST(BuildReport, InfeasibleSizingPropagates) {
  EXPECT_THROW(build_report(Network{"l2", {layer2(8)}}, accel(100, 1e8, 8), ddr4_2400_x64()),
               InfeasibleError);
}

TEST(BuildReport, EmptyNetworkRejected) {
  EXPECT_THROW(build_report(Network{"none", {}}, accel(1e6, 1e8, 8), ddr4_2400_x64()),
               ValidationError);
}

ReverseDesignRequest example_two_request(Count bits) {
  ReverseDesignRequest req;
  req.area_budget = 6e6;
  req.b_w = req.b_a = bits;
  return req;
}

TEST(ReverseDesign, ExampleTwoOperatingPointIsFeasible) {
  const auto res = reverse_design(Network{"l2", {layer2(8)}}, example_two_request(8));
  EXPECT_GE(res.max_frequency, 100e6);
  EXPECT_TRUE(res.memory_limited);
  EXPECT_EQ(res.limiting_layer, "layer2");
  EXPECT_EQ(res.sizing.array, (ArrayDims{63, 63}));

  // Direct closed form on the sized 63 x 63 array: 2 x 2 passes, inputs read twice.
  const auto d = testing::dims(layer2(8));
  const double opb = static_cast<double>(testing::u64(oracle::total_ops(d))) /
                     static_cast<double>(testing::u64(oracle::grouped_bits(d, 63, 63, false)));
  EXPECT_DOUBLE_EQ(res.max_frequency, opb * 153.6e9 * 4 / 40'960.0);
}

TEST(ReverseDesign, RequestBitsOverrideLayerBits) {
  const auto a = reverse_design(Network{"l2", {layer2(32)}}, example_two_request(8));
  const auto b = reverse_design(Network{"l2", {layer2(8)}}, example_two_request(8));
  EXPECT_DOUBLE_EQ(a.max_frequency, b.max_frequency);
}

TEST(ReverseDesign, DoublingBusDoublesMaxFrequency) {
  auto req = example_two_request(8);
  const auto base = reverse_design(Network{"l2", {layer2(8)}}, req);
  req.mem.bus_width *= 2;
  const auto wide = reverse_design(Network{"l2", {layer2(8)}}, req);
  EXPECT_DOUBLE_EQ(wide.max_frequency, 2 * base.max_frequency);
}

TEST(ReverseDesign, RequiredBandwidthAtTarget) {
  auto req = example_two_request(8);
  const auto at_max = reverse_design(Network{"l2", {layer2(8)}}, req);
  EXPECT_NEAR(at_max.required_bandwidth, req.mem.bandwidth(), 1e-3);
  req.target_frequency = 100e6;
  const auto at_100 = reverse_design(Network{"l2", {layer2(8)}}, req);
  EXPECT_NEAR(at_100.required_bandwidth, req.mem.bandwidth() * 100e6 / at_max.max_frequency,
              1e-3);
  req.target_frequency = 0.0;
  EXPECT_THROW(reverse_design(Network{"l2", {layer2(8)}}, req), ValidationError);
}

TEST(ReverseDesign, UnboundedWithInfiniteBandwidth) {
  auto req = example_two_request(8);
  req.mem.transfer_rate = std::numeric_limits<double>::infinity();
  const auto res = reverse_design(Network{"l2", {layer2(8)}}, req);
  EXPECT_TRUE(std::isinf(res.max_frequency));
  EXPECT_FALSE(res.memory_limited);
}

TEST(ReverseDesign, MinimumOverLayers) {
  const auto net = load_network(QROOF_DATA_DIR "/presets/resnet18.json");
  auto req = example_two_request(4);
  const auto all = reverse_design(net, req);
  for (const auto& l : net.layers) {
    EXPECT_LE(all.max_frequency, reverse_design(Network{"one", {l}}, req).max_frequency);
  }
}

TEST(ReverseDesign, InfeasibleBudget) {
  auto req = example_two_request(8);
  req.area_budget = 10;
  EXPECT_THROW(reverse_design(Network{"l2", {layer2(8)}}, req), InfeasibleError);
}

}  // namespace
}  // namespace qroof
