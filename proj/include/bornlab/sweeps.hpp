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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bornlab/hilbert.hpp"
#include "bornlab/pointer.hpp"
#include "bornlab/probability_rule.hpp"

namespace bornlab {

enum class Quantity { orthogonal_weight, infidelity, pointer_mean, pointer_variance, macro_micro };

std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);

/// Rows with N below this are still computed but left out of fits.
inline constexpr int kDefaultMinFitCount = 25;

struct SweepPlan {
    StateVector state;
    Observable observable;
    double coupling = 1.0;
    double tau = 1.0;
    double sigma = 1.0;
    /// Defaults to PointerGrid::for_sigma(sigma).
    std::optional<PointerGrid> grid;
    std::vector<int> counts;
    std::vector<Quantity> quantities;
    /// Rule and seed used by the macro_micro quantity.
    ProbabilityRule rule = ProbabilityRule::born();
    std::uint64_t seed = 0;
    int min_fit_count = kDefaultMinFitCount;
};

/// One row per particle count. orthogonal_weight adds a companion leading_order column;
/// macro_micro expands to macro_mean, micro_mean and z_score.
struct SweepTable {
    std::vector<int> counts;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<bool> in_fit;

    std::vector<double> column(std::string_view name) const;
};

struct FitPoint {
    double count = 0.0;
    double value = 0.0;
    bool included = false;
};

/// Least squares of log(value) against log(N).
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<FitPoint> points;

    std::size_t n_points() const;
};

/// Validates the plan (strictly increasing counts, at least one quantity).
void validate(const SweepPlan& plan);

SweepTable run_sweep(const SweepPlan& plan);

/// Fits the named column over the rows flagged in_fit. Throws NumericalFloor on a non-positive value.
FitResult fit_power_law(const SweepTable& table, std::string_view column);
/// Fits values[i] against counts[i] for every count >= min_count.
FitResult fit_power_law(std::span<const double> counts, std::span<const double> values, double min_count = 0.0);

/// "N,<columns...>,in_fit".
std::string to_csv(const SweepTable& table);
/// {"quantity", "slope", "r2", "n_points"}.
std::string fit_summary_json(std::string_view quantity, const FitResult& fit);

}  // namespace bornlab
