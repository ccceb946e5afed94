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

#ifndef PAULIPATH_PAULIPATH_HPP
#define PAULIPATH_PAULIPATH_HPP

#include "paulipath/circuit.hpp"
#include "paulipath/errors.hpp"
#include "paulipath/oracle.hpp"
#include "paulipath/pauli.hpp"
#include "paulipath/propagate.hpp"
#include "paulipath/surrogate.hpp"
#include "paulipath/truncation.hpp"

#endif  // PAULIPATH_PAULIPATH_HPP
