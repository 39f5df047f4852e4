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

// CSV inputs for fitting: `x,y` point lists and `n,m,k,b_w,b_a,area`
// synthesis samples. Plain comma-separated values, one header line.

#include <charconv>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qroof/network_io.hpp"
#include "qroof/regression.hpp"

namespace qroof {

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Data rows after checking the header; blank lines and '#' comments skipped.
inline std::vector<std::vector<std::string_view>> csv_rows(
    std::string_view text, std::initializer_list<std::string_view> header, std::string_view source,
    std::vector<std::size_t>& line_numbers) {
  std::vector<std::vector<std::string_view>> rows;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      if (!std::equal(fields.begin(), fields.end(), header.begin(), header.end())) {
        std::string expected;
        for (auto h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
        throw ParseError(fmt::format("{}: line {}: expected header '{}'", source, line_no, expected));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("{}: line {}: expected {} fields, got {}", source, line_no,
                                   header.size(), fields.size()));
    }
    rows.push_back(std::move(fields));
    line_numbers.push_back(line_no);
  }
  if (!have_header) throw ParseError(fmt::format("{}: empty CSV", source));
  return rows;
}

inline double csv_number(std::string_view field, std::string_view source, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(field), &used);
    if (used == field.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(fmt::format("{}: line {}: '{}' is not a number", source, line, field));
}

inline Count csv_count(std::string_view field, std::string_view source, std::size_t line) {
  Count v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(
        fmt::format("{}: line {}: '{}' is not a non-negative integer", source, line, field));
  }
  return v;
}

}  // namespace detail

inline std::vector<Point2> parse_points_csv(std::string_view text, std::string_view source = "csv") {
  std::vector<std::size_t> lines;
  const auto rows = detail::csv_rows(text, {"x", "y"}, source, lines);
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pts.push_back({detail::csv_number(rows[i][0], source, lines[i]),
                   detail::csv_number(rows[i][1], source, lines[i])});
  }
  return pts;
}

inline std::vector<AreaSample> parse_samples_csv(std::string_view text,
                                                 std::string_view source = "csv") {
  std::vector<std::size_t> lines;
  const auto rows = detail::csv_rows(text, {"n", "m", "k", "b_w", "b_a", "area"}, source, lines);
  std::vector<AreaSample> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    AreaSample s;
    s.config.name = fmt::format("row{}", lines[i]);
    s.config.n = detail::csv_count(r[0], source, lines[i]);
    s.config.m = detail::csv_count(r[1], source, lines[i]);
    s.config.k = detail::csv_count(r[2], source, lines[i]);
    s.config.b_w = detail::csv_count(r[3], source, lines[i]);
    s.config.b_a = detail::csv_count(r[4], source, lines[i]);
    s.area = detail::csv_number(r[5], source, lines[i]);
    validate(s.config);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Point2> load_points_csv(const std::filesystem::path& path) {
  return parse_points_csv(detail::read_file(path), path.string());
}

inline std::vector<AreaSample> load_samples_csv(const std::filesystem::path& path) {
  return parse_samples_csv(detail::read_file(path), path.string());
}

}  // namespace qroof
