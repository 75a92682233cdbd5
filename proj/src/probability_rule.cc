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

#include "bornlab/probability_rule.hpp"

#include <cmath>

#include "bornlab/errors.hpp"

namespace bornlab {

std::string_view rule_name(RuleTag tag) {
    switch (tag) {
        case RuleTag::born:
            return "born";
        case RuleTag::abs_amplitude:
            return "abs_amplitude";
        case RuleTag::quartic:
            return "quartic";
        case RuleTag::uniform:
            return "uniform";
        case RuleTag::custom:
            return "custom";
    }
    return "unknown";
}

RuleTag parse_rule_tag(std::string_view name) {
    for (auto tag : {RuleTag::born, RuleTag::abs_amplitude, RuleTag::quartic, RuleTag::uniform, RuleTag::custom}) {
        if (rule_name(tag) == name) {
            return tag;
        }
    }
    throw InvalidArgument("unknown probability rule '" + std::string(name) + "'");
}

std::vector<double> apply_rule(const ProbabilityRule& rule, std::span<const Complex> b) {
    const std::size_t d = b.size();
    if (d == 0) {
        throw InvalidArgument("apply_rule: empty amplitude vector");
    }
    std::vector<double> p(d);
    switch (rule.tag) {
        case RuleTag::born:
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = std::norm(b[j]);
            }
            break;
        case RuleTag::abs_amplitude:
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = std::abs(b[j]);
            }
            break;
        case RuleTag::quartic:
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = std::norm(b[j]) * std::norm(b[j]);
            }
            break;
        case RuleTag::uniform:
            for (auto& x : p) {
                x = 1.0 / static_cast<double>(d);
            }
            return p;
        case RuleTag::custom: {
            if (rule.custom.size() != d) {
                throw InvalidArgument("custom rule has length " + std::to_string(rule.custom.size()) +
                                      ", expected " + std::to_string(d));
            }
            double total = 0.0;
            for (double x : rule.custom) {
                if (!(x >= 0.0) || !std::isfinite(x)) {
                    throw InvalidArgument("custom rule has a negative or non-finite entry");
                }
                total += x;
            }
            if (std::abs(total - 1.0) > kNormTolerance) {
                throw InvalidArgument("custom rule does not sum to 1");
            }
            return rule.custom;
        }
    }
    double total = 0.0;
    for (double x : p) {
        total += x;
    }
    if (!(total > 0.0)) {
        throw InvalidArgument("apply_rule: all amplitudes vanish");
    }
    if (rule.tag != RuleTag::born) {
        for (auto& x : p) {
            x /= total;
        }
    }
    return p;
}

std::vector<double> apply_rule(const ProbabilityRule& rule, const StateVector& psi) {
    return apply_rule(rule, psi.amplitudes());
}

std::vector<double> apply_rule(const ProbabilityRule& rule, const StateVector& psi, const Observable& a) {
    const auto b = eigen_amplitudes(psi, a);
    return apply_rule(rule, b);
}

}  // namespace bornlab
