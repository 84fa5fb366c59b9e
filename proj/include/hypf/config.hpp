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

#ifndef HYPF_CONFIG_HPP_
#define HYPF_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "hypf/errors.hpp"

namespace hypf {

// Flat key=value configuration. Lines starting with '#' and blank lines are
// ignored. Unknown keys are rejected by name so typos fail loudly.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InputError("config parse error at line " + std::to_string(lineno) +
                         ": expected key=value");
      }
      cfg.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
  }
  static Config parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open config file: " + path);
    return parse(f);
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_str(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
  }
  double get_double(const std::string& key, double dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw InputError("config key '" + key + "' is not a number: " + it->second);
    }
  }
  long long get_int(const std::string& key, long long dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
      std::size_t pos = 0;
      long long v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw InputError("config key '" + key + "' is not an integer: " + it->second);
    }
  }
  bool get_bool(const std::string& key, bool dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw InputError("config key '" + key + "' is not a boolean: " + it->second);
  }

  // Rejects any key outside the allowed set, naming the offender.
  void require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
      if (!allowed.count(key)) {
        throw InputError("unknown config key: " + key);
      }
    }
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(std::string s) {
    auto issp = [](char c) { return c == ' ' || c == '\t'; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
  }
  std::map<std::string, std::string> values_;
};

}  // namespace hypf

#endif  // HYPF_CONFIG_HPP_
