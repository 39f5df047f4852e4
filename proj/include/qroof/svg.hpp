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

// Hand-emitted SVG roofline plot: log-log axes with decade gridlines, a
// horizontal compute ceiling, a diagonal memory ceiling, the ridge point,
// red dots for raw layer requirements and green dots for partial-sum points.

#include <algorithm>
#include <cmath>
#include <string>

#include "qroof/roofline.hpp"

namespace qroof {

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// "1e9" style decade label.
inline std::string decade_label(int e) { return fmt::format("1e{}", e); }

}  // namespace detail

struct SvgOptions {
  int width = 800;
  int height = 560;
  std::string title;
};

inline std::string render_roofline_svg(const RooflineReport& r, const SvgOptions& opts = {}) {
  constexpr double left = 80, right = 24, top = 40, bottom = 56;
  const double plot_w = opts.width - left - right;
  const double plot_h = opts.height - top - bottom;

  double x_lo = r.ridge_point, x_hi = r.ridge_point;
  double y_lo = r.compute_ceiling, y_hi = r.compute_ceiling;
  for (const auto& p : r.points) {
    x_lo = std::min(x_lo, p.point.ops_per_bit);
    x_hi = std::max(x_hi, p.point.ops_per_bit);
    y_lo = std::min(y_lo, p.point.required_ops);
    y_hi = std::max(y_hi, p.point.required_ops);
  }
  const int ex0 = static_cast<int>(std::floor(std::log10(x_lo))) - 1;
  const int ex1 = static_cast<int>(std::ceil(std::log10(x_hi))) + 1;
  const int ey0 = static_cast<int>(std::floor(std::log10(y_lo))) - 1;
  const int ey1 = static_cast<int>(std::ceil(std::log10(y_hi))) + 1;

  auto sx = [&](double x) { return left + (std::log10(x) - ex0) / (ex1 - ex0) * plot_w; };
  auto sy = [&](double y) { return top + plot_h - (std::log10(y) - ey0) / (ey1 - ey0) * plot_h; };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      opts.width, opts.height, opts.width, opts.height);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", opts.width, opts.height);
  const auto title = opts.title.empty() ? fmt::format("OPS roofline: {}", r.network_name) : opts.title;
  s += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                   left + plot_w / 2, detail::xml_escape(title));

  s += "<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int e = ex0; e <= ex1; ++e) {
    const double x = sx(std::pow(10.0, e));
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", x, top, x,
                     top + plot_h);
  }
  for (int e = ey0; e <= ey1; ++e) {
    const double y = sy(std::pow(10.0, e));
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left, y,
                     left + plot_w, y);
  }
  s += "</g>\n<g class=\"axis-labels\" fill=\"#333333\">\n";
  for (int e = ex0; e <= ex1; ++e) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     sx(std::pow(10.0, e)), top + plot_h + 18, detail::decade_label(e));
  }
  for (int e = ey0; e <= ey1; ++e) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", left - 8,
                     sy(std::pow(10.0, e)) + 4, detail::decade_label(e));
  }
  s += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">Operation density [OPS/bit]</text>\n",
      left + plot_w / 2, static_cast<double>(opts.height) - 12);
  s += fmt::format(
      "<text transform=\"translate(18 {:.2f}) rotate(-90)\" text-anchor=\"middle\">"
      "Performance [OPS/s]</text>\n",
      top + plot_h / 2);
  s += "</g>\n";
  s += fmt::format(
      "<rect class=\"frame\" x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"#333333\"/>\n",
      left, top, plot_w, plot_h);

  // Memory diagonal from the left edge up to the ridge, then the flat compute roof.
  const double x_left = std::pow(10.0, ex0);
  const double x_right = std::pow(10.0, ex1);
  const double y_at_left = std::max(x_left * r.bandwidth, std::pow(10.0, ey0));
  const double x_at_ylo = y_at_left / r.bandwidth;
  s += fmt::format(
      "<line class=\"memory-ceiling\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
      "stroke=\"#1f4e99\" stroke-width=\"2\"/>\n",
      sx(x_at_ylo), sy(y_at_left), sx(r.ridge_point), sy(r.compute_ceiling));
  s += fmt::format(
      "<line class=\"compute-ceiling\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
      "stroke=\"#1f4e99\" stroke-width=\"2\"/>\n",
      sx(r.ridge_point), sy(r.compute_ceiling), sx(x_right), sy(r.compute_ceiling));
  s += fmt::format(
      "<circle class=\"ridge-point\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"none\" "
      "stroke=\"#1f4e99\" stroke-width=\"2\"><title>ridge {} OPS/bit</title></circle>\n",
      sx(r.ridge_point), sy(r.compute_ceiling), r.ridge_point);

  for (const auto& p : r.points) {
    const bool raw = p.point.variant == PointVariant::raw;
    s += fmt::format(
        "<circle class=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\">"
        "<title>{} ({}): {} OPS/bit, {} OPS/s, {}</title></circle>\n",
        raw ? "point-raw" : "point-partial-sum", sx(p.point.ops_per_bit),
        sy(p.point.required_ops), raw ? "red" : "green", detail::xml_escape(p.point.layer_name),
        to_string(p.point.variant), p.point.ops_per_bit, p.point.required_ops,
        to_string(p.classification.bound));
  }
  s += "</svg>\n";
  return s;
}

}  // namespace qroof
