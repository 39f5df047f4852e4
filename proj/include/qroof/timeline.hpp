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

// Cycle-level memory access pattern of one layer on a shared read/write bus.
//
// Phases:
//   prefetch - weights and the first k input rows, at full bus rate. No
//              pixels are computed.
//   steady   - one output pixel per cycle when the bus keeps up. Each pixel
//              reads one new input value (n values when per_feature) plus k
//              more at the start of every output row after the first, and
//              writes m output activations. Reads are capped by the input
//              still unread. A pixel whose demand exceeds the bus width takes
//              ceil(demand / bus) cycles; the extra cycles are stalls.
//   tail     - input never consumed by the steady stream (strided layers,
//              per_feature = false) is flushed at full bus rate.
//
// With batch = 1 the trace moves exactly the single-pass traffic of the
// layer: weights + inputs + outputs.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qroof/netmodel.hpp"

namespace qroof {

enum class TimelinePhase { prefetch, steady, tail };

constexpr std::string_view to_string(TimelinePhase p) {
  switch (p) {
    case TimelinePhase::prefetch: return "prefetch";
    case TimelinePhase::steady: return "steady";
    case TimelinePhase::tail: return "tail";
  }
  return "?";
}

// Cycles [cycle_start, cycle_end) each moving bits_per_cycle bits.
struct TraceSegment {
  Count cycle_start = 0;
  Count cycle_end = 0;
  Count bits_per_cycle = 0;
  TimelinePhase phase = TimelinePhase::steady;

  Count cycles() const { return cycle_end - cycle_start; }
  bool operator==(const TraceSegment&) const = default;
};

struct TimelineTrace {
  Count prefetch_end = 0;         // first steady-state cycle
  std::vector<Count> row_starts;  // first cycle of each output row
  std::vector<TraceSegment> segments;
  Count total_cycles = 0;
  Count total_bits = 0;
  Count stall_cycles = 0;
  double utilization = 0.0;  // total_bits / (total_cycles * bus)
};

struct TimelineOptions {
  Count bus_bits_per_cycle = 64;
  bool per_feature = true;
  Count batch = 1;  // weight bits are divided across the batch
};

namespace detail {

class TraceBuilder {
 public:
  TraceBuilder(TimelineTrace& trace, Count bus) : trace_(trace), bus_(bus) {}

  Count cycle() const { return cycle_; }

  // Moves `bits` at full bus rate, at least one cycle. Returns cycles used.
  Count transfer(Count bits, TimelinePhase phase) {
    const Count cycles = std::max<Count>(1, ceil_div(bits, bus_));
    if (bits <= bus_) {
      emit(1, bits, phase);
    } else {
      const Count full = bits / bus_;
      const Count rem = bits % bus_;
      emit(full, bus_, phase);
      if (rem != 0) emit(1, rem, phase);
    }
    trace_.total_bits = add(trace_.total_bits, bits);
    return cycles;
  }

 private:
  void emit(Count cycles, Count bits_per_cycle, TimelinePhase phase) {
    auto& segs = trace_.segments;
    if (!segs.empty() && segs.back().phase == phase &&
        segs.back().bits_per_cycle == bits_per_cycle && segs.back().cycle_end == cycle_) {
      segs.back().cycle_end += cycles;
    } else {
      segs.push_back({cycle_, cycle_ + cycles, bits_per_cycle, phase});
    }
    cycle_ += cycles;
  }

  TimelineTrace& trace_;
  Count bus_;
  Count cycle_ = 0;
};

}  // namespace detail

inline TimelineTrace simulate(const Layer& l, const TimelineOptions& opts) {
  validate(l);
  if (opts.bus_bits_per_cycle < 1) throw ValidationError("bus_bits_per_cycle must be >= 1");
  if (opts.batch < 1) throw ValidationError("batch must be >= 1");
  using detail::mul;

  TimelineTrace trace;
  detail::TraceBuilder tb(trace, opts.bus_bits_per_cycle);

  const Count weight_bits = detail::ceil_div(mul(l.n, l.m, l.k, l.k, l.b_w), opts.batch);
  const Count prefetch_rows = std::min(l.k, l.in_h);
  const Count prefetch_values = mul(l.n, prefetch_rows, l.in_w);
  tb.transfer(weight_bits + mul(prefetch_values, l.b_a), TimelinePhase::prefetch);
  trace.prefetch_end = tb.cycle();

  Count unread = mul(l.n, l.in_h, l.in_w) - prefetch_values;  // input values
  const Count fanout = opts.per_feature ? l.n : 1;
  const Count output_bits = mul(l.m, l.b_a);
  trace.row_starts.reserve(l.out_h);
  for (Count row = 0; row < l.out_h; ++row) {
    trace.row_starts.push_back(tb.cycle());
    for (Count col = 0; col < l.out_w; ++col) {
      const Count wanted = mul(fanout, (col == 0 && row > 0) ? l.k + 1 : 1);
      const Count reads = std::min(wanted, unread);
      unread -= reads;
      const Count cycles = tb.transfer(mul(reads, l.b_a) + output_bits, TimelinePhase::steady);
      trace.stall_cycles += cycles - 1;
    }
  }
  if (unread > 0) tb.transfer(mul(unread, l.b_a), TimelinePhase::tail);

  trace.total_cycles = tb.cycle();
  trace.utilization = static_cast<double>(trace.total_bits) /
                      (static_cast<double>(trace.total_cycles) *
                       static_cast<double>(opts.bus_bits_per_cycle));
  return trace;
}

inline TimelineTrace simulate(const Layer& l, Count bus_bits_per_cycle, bool per_feature = true) {
  return simulate(l, TimelineOptions{bus_bits_per_cycle, per_feature, 1});
}

}  // namespace qroof
