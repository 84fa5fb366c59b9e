// Copyright 2026 The hypf Authors.
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

#include "hypf/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypf {

std::vector<double> to_poincare(const FactorPoint& p) {
  double denom = p.time() + 1.0 / std::sqrt(p.alpha());
  std::vector<double> out(p.space().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.space()[i] / denom;
  return out;
}

namespace {
std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace

std::string render_disk_svg(const std::vector<std::pair<std::string, FactorPoint>>& entities,
                            const std::string& title) {
  const int size = 640;
  const double cx = size / 2.0, cy = size / 2.0, radius = size / 2.0 - 20.0;
  std::ostringstream svg;
  svg.precision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
      << "<title>" << escape_xml(title) << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& [label, point] : entities) {
    if (point.dim() != 2) throw InputError("render_disk_svg: factor dimension must be 2");
    auto p = to_poincare(point);
    double x = cx + p[0] * radius;
    double y = cy - p[1] * radius;
    svg << "<circle class=\"marker\" cx=\"" << x << "\" cy=\"" << y
        << "\" r=\"3\" fill=\"steelblue\"/>\n"
        << "<text x=\"" << x + 4 << "\" y=\"" << y - 4 << "\" font-size=\"9\">"
        << escape_xml(label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_bars_svg(const std::vector<std::pair<std::string, double>>& bars,
                            const std::string& title) {
  const int width = 640;
  const int row = 18;
  const int height = 40 + row * static_cast<int>(bars.size());
  double maxv = 1e-12;
  for (const auto& [label, v] : bars) maxv = std::max(maxv, v);
  std::ostringstream svg;
  svg.precision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n"
      << "<title>" << escape_xml(title) << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  int y = 30;
  for (const auto& [label, v] : bars) {
    double w = std::max(0.0, v / maxv) * (width - 220);
    svg << "<text x=\"4\" y=\"" << y + 12 << "\" font-size=\"10\">" << escape_xml(label)
        << "</text>\n"
        << "<rect class=\"marker\" x=\"200\" y=\"" << y << "\" width=\"" << w
        << "\" height=\"" << row - 4 << "\" fill=\"steelblue\"/>\n"
        << "<text x=\"" << 204 + w << "\" y=\"" << y + 12 << "\" font-size=\"9\">" << v
        << "</text>\n";
    y += row;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hypf
