// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bornlab/hilbert.hpp"

namespace bornlab {

/// {"amplitudes": [[re, im], ...], "eigenvalues": [...], "basis": [[re, im], ...]}.
/// The basis is row-major and omitted when it is the identity.
std::string instance_to_json(const StateVector& psi, const Observable& a);
std::string state_to_json(const StateVector& psi);

/// Reads "amplitudes". Throws InvalidArgument on malformed text and InvariantViolation on a bad norm.
StateVector state_from_json(std::string_view text);
/// Reads "eigenvalues" and the optional "basis".
Observable observable_from_json(std::string_view text);
Instance instance_from_json(std::string_view text);

/// Parses a JSON array of [re, im] pairs.
std::vector<Complex> parse_complex_list(std::string_view text);
/// Parses "1,-1,2.5" or a JSON array of numbers.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace bornlab
