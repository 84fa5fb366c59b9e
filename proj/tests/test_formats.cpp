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

#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hypf/config.hpp"
#include "hypf/plot.hpp"
#include "hypf/train.hpp"

using namespace hypf;

namespace {

// Minimal well-formedness scan: every opened tag is closed in order,
// self-closing and declaration tags ignored.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string::npos) {
    std::size_t j = text.find('>', i);
    if (j == std::string::npos) return false;
    std::string tag = text.substr(i + 1, j - i - 1);
    i = j + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    bool closing = tag[0] == '/';
    bool self_closing = tag.back() == '/';
    std::string name = tag.substr(closing ? 1 : 0);
    auto sp = name.find_first_of(" \t\n/");
    if (sp != std::string::npos) name = name.substr(0, sp);
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_SUITE("formats") {

TEST_CASE("config parsing") {
  std::istringstream in(
      "# a comment\n"
      "lr = 0.25\n"
      "steps=100\n"
      "deterministic=true\n"
      "metric=l2\n"
      "\n");
  auto cfg = Config::parse(in);
  CHECK(cfg.get_double("lr", 0.0) == 0.25);
  CHECK(cfg.get_int("steps", 0) == 100);
  CHECK(cfg.get_bool("deterministic", false));
  CHECK(cfg.get_str("metric", "l1") == "l2");
  CHECK(cfg.get_int("missing", 7) == 7);

  CHECK_THROWS_AS(cfg.require_known({"lr", "steps"}), InputError);
  try {
    cfg.require_known({"lr", "steps", "metric"});
    FAIL("expected unknown-key error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("deterministic") != std::string::npos);
  }
  cfg.require_known({"lr", "steps", "deterministic", "metric"});

  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(Config::parse(bad), InputError);
  std::istringstream badnum("lr=abc\n");
  CHECK_THROWS_AS(Config::parse(badnum).get_double("lr", 0), InputError);
}

TEST_CASE("train config round-trips through Config") {
  TrainConfig tc;
  tc.k = 6;
  tc.lr = 0.125;
  tc.metric = ProductMetric::l2;
  tc.seed = 99;
  auto cfg = tc.to_config();
  auto back = TrainConfig::from_config(cfg);
  CHECK(back.k == 6);
  CHECK(back.lr == doctest::Approx(0.125));
  CHECK(back.metric == ProductMetric::l2);
  CHECK(back.seed == 99);

  Config bad;
  bad.set("nope", "1");
  CHECK_THROWS_AS(TrainConfig::from_config(bad), InputError);
}

TEST_CASE("disk SVG is well-formed with one marker per entity") {
  std::vector<std::pair<std::string, FactorPoint>> pts;
  for (int i = 0; i < 7; ++i) {
    double r = 0.2 * i;
    pts.emplace_back("e" + std::to_string(i),
                     exp0(TangentVector{r, 0.1 * i}, Curvature(1.0)));
  }
  auto svg = render_disk_svg(pts, "demo <factor>");
  CHECK(xml_well_formed(svg));
  CHECK(count_occurrences(svg, "class=\"marker\"") == 7);
  CHECK(svg.find("&lt;factor&gt;") != std::string::npos);

  // Origin maps to the disk center; radial points map to collinear disk
  // points with growing Euclidean radius below 1.
  auto origin = to_poincare(FactorPoint::origin(2, Curvature(1.0)));
  CHECK(origin[0] == 0.0);
  CHECK(origin[1] == 0.0);
  double prev = -1.0;
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    auto p = to_poincare(exp0(TangentVector{r, 0.0}, Curvature(1.0)));
    CHECK(p[1] == 0.0);
    CHECK(p[0] > prev);
    CHECK(p[0] < 1.0);
    prev = p[0];
  }
}

TEST_CASE("bar SVG is well-formed with one marker per label") {
  std::vector<std::pair<std::string, double>> bars{{"a", 0.5}, {"b", 1.5}, {"c", 0.0}};
  auto svg = render_bars_svg(bars, "norms");
  CHECK(xml_well_formed(svg));
  CHECK(count_occurrences(svg, "class=\"marker\"") == 3);
}

TEST_CASE("disk rendering requires d = 2") {
  std::vector<std::pair<std::string, FactorPoint>> pts{
      {"x", FactorPoint::origin(3, Curvature(1.0))}};
  CHECK_THROWS_AS(render_disk_svg(pts, "bad"), InputError);
}

}  // TEST_SUITE
