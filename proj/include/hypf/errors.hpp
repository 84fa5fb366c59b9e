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

#ifndef HYPF_ERRORS_HPP_
#define HYPF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hypf {

// Bad caller input: shape mismatches, unknown ids, malformed files, invalid
// config keys. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical quantity left its admissible domain beyond tolerance
// (e.g. an arccosh argument below 1 - 1e-9).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A checked contract did not hold (diagnostic subcommands, divergence
// detectors, optimizer feasibility failures). Maps to CLI exit code 1.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hypf

#endif  // HYPF_ERRORS_HPP_
