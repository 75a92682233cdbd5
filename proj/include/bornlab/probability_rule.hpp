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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bornlab/hilbert.hpp"

namespace bornlab {

enum class RuleTag { born, abs_amplitude, quartic, uniform, custom };

/// Candidate map from eigenbasis amplitudes b_j to outcome probabilities p_j.
struct ProbabilityRule {
    RuleTag tag = RuleTag::born;
    /// Only used by RuleTag::custom.
    std::vector<double> custom;

    static ProbabilityRule born() { return {RuleTag::born, {}}; }
    static ProbabilityRule abs_amplitude() { return {RuleTag::abs_amplitude, {}}; }
    static ProbabilityRule quartic() { return {RuleTag::quartic, {}}; }
    static ProbabilityRule uniform() { return {RuleTag::uniform, {}}; }
    static ProbabilityRule from_vector(std::vector<double> p) { return {RuleTag::custom, std::move(p)}; }
};

std::string_view rule_name(RuleTag tag);
/// Parses "born", "abs_amplitude", "quartic", "uniform" or "custom".
RuleTag parse_rule_tag(std::string_view name);

/// p_j for amplitudes already expressed in the eigenbasis.
std::vector<double> apply_rule(const ProbabilityRule& rule, std::span<const Complex> eigen_amplitudes);
/// p_j for psi, taking psi's amplitudes as eigenbasis coordinates.
std::vector<double> apply_rule(const ProbabilityRule& rule, const StateVector& psi);
/// p_j for psi measured against A (amplitudes rotated into A's eigenbasis first).
std::vector<double> apply_rule(const ProbabilityRule& rule, const StateVector& psi, const Observable& a);

}  // namespace bornlab
