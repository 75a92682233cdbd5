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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bornlab/hilbert.hpp"
#include "bornlab/measurement.hpp"
#include "bornlab/pointer.hpp"
#include "bornlab/probability_rule.hpp"

namespace bornlab {

inline constexpr double kConsistencyTolerance = 1e-9;
inline constexpr double kVerdictThreshold = 4.0;

struct OutcomeCounts {
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;

    double mean(std::span<const double> eigenvalues) const;
};

/// |sum_j p_j alpha_j - sum_j |b_j|^2 alpha_j| for the rule's p.
double consistency_residual(const ProbabilityRule& rule, const StateVector& psi, const Observable& a);

/// True if the spectra, each shifted by its last eigenvalue, span a (d-1)-dimensional space.
bool spectra_span_simplex(std::span<const std::vector<double>> spectra, std::size_t dim);

/// Every point of the probability simplex (resolution grid_step) whose consistency residual is
/// at most 1e-9 against every spectrum simultaneously. Amplitudes of psi are read as
/// eigenbasis coordinates for each spectrum.
/// Throws SpanConditionFailed when the spectra cannot pin down a unique vector.
std::vector<std::vector<double>> uniqueness_scan(const StateVector& psi, std::span<const std::vector<double>> spectra,
                                                 double grid_step);

/// Multinomial sample of N single-particle outcomes under the rule. Deterministic in seed.
OutcomeCounts sample_outcomes(const ProbabilityRule& rule, const StateVector& psi, const Observable& a,
                              std::int64_t count, std::uint64_t seed);

struct MacroMicroReport {
    std::string rule;
    double macro_mean = 0.0;
    double micro_mean = 0.0;
    double z_score = 0.0;
    bool consistent = false;
};

/// Compares the mean read off the pointer after the collective measurement with the mean of
/// N per-particle outcomes drawn under the rule.
///
/// macro_mean is the pointer shift divided by lambda * tau; micro_mean is sum_j N_j alpha_j / N.
/// The z-score scales their difference by the rule's single-outcome standard deviation over
/// sqrt(N), falling back to Delta A when the rule's spread is zero. The verdict is
/// "consistent" iff |z| <= 4.
/// Throws DegenerateCoupling when lambda = 0.
MacroMicroReport macro_micro_test(const ProbabilityRule& rule, const StateVector& psi, const Observable& a,
                                  const MeasurementConfig& cfg, const PointerWavefunction& w, std::uint64_t seed);

/// Same comparison with a precomputed macroscopic mean.
MacroMicroReport compare_with_macro(const ProbabilityRule& rule, const StateVector& psi, const Observable& a,
                                    double macro_mean, std::int64_t count, std::uint64_t seed);

/// {"rule", "macro_mean", "micro_mean", "z_score", "verdict"}.
std::string to_json(const MacroMicroReport& report);

}  // namespace bornlab
