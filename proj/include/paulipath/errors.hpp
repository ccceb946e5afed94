// Copyright 2026 The paulipath developers
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

#ifndef PAULIPATH_ERRORS_HPP
#define PAULIPATH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace paulipath {

/// Input exceeds a hard resource limit (statevector qubit cap, exact
/// enumeration gate cap, ...). Distinct from invalid input so callers can
/// map it to a dedicated exit code.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed textual input (circuit files, topology files, Pauli strings,
/// serialized surrogates).
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace paulipath

#endif  // PAULIPATH_ERRORS_HPP
