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

#include "bornlab/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "bornlab/born.hpp"
#include "bornlab/ensemble.hpp"
#include "bornlab/errors.hpp"
#include "bornlab/format.hpp"
#include "bornlab/measurement.hpp"

namespace bornlab {

std::string_view quantity_name(Quantity q) {
    switch (q) {
        case Quantity::orthogonal_weight:
            return "orthogonal_weight";
        case Quantity::infidelity:
            return "infidelity";
        case Quantity::pointer_mean:
            return "pointer_mean";
        case Quantity::pointer_variance:
            return "pointer_variance";
        case Quantity::macro_micro:
            return "macro_micro";
    }
    return "unknown";
}

Quantity parse_quantity(std::string_view name) {
    for (auto q : {Quantity::orthogonal_weight, Quantity::infidelity, Quantity::pointer_mean,
                   Quantity::pointer_variance, Quantity::macro_micro}) {
        if (quantity_name(q) == name) {
            return q;
        }
    }
    throw InvalidArgument("unknown sweep quantity '" + std::string(name) + "'");
}

std::vector<double> SweepTable::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw InvalidArgument("sweep table has no column '" + std::string(name) + "'");
    }
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(row[idx]);
    }
    return out;
}

std::size_t FitResult::n_points() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const FitPoint& p) { return p.included; }));
}

void validate(const SweepPlan& plan) {
    if (plan.counts.empty()) {
        throw InvalidArgument("sweep plan has no particle counts");
    }
    for (std::size_t i = 0; i < plan.counts.size(); ++i) {
        if (plan.counts[i] < 1) {
            throw InvalidArgument("sweep particle counts must be >= 1");
        }
        if (i > 0 && plan.counts[i] <= plan.counts[i - 1]) {
            throw InvalidArgument("sweep particle counts must be strictly increasing");
        }
    }
    if (plan.quantities.empty()) {
        throw InvalidArgument("sweep plan requests no quantities");
    }
    if (plan.state.dim() != plan.observable.dim()) {
        throw DimensionMismatch("sweep state and observable differ in dimension");
    }
}

SweepTable run_sweep(const SweepPlan& plan) {
    validate(plan);
    const PointerGrid grid = plan.grid.value_or(PointerGrid::for_sigma(plan.sigma));
    const auto pointer = gaussian_init(grid, 0.0, plan.sigma);
    const auto q_moments = moments(to_momentum(pointer));
    const double sigma_q2 = q_moments.variance + q_moments.mean * q_moments.mean;

    SweepTable table;
    for (auto q : plan.quantities) {
        switch (q) {
            case Quantity::orthogonal_weight:
                table.columns.emplace_back("orthogonal_weight");
                table.columns.emplace_back("leading_order");
                break;
            case Quantity::macro_micro:
                table.columns.emplace_back("macro_mean");
                table.columns.emplace_back("micro_mean");
                table.columns.emplace_back("z_score");
                break;
            default:
                table.columns.emplace_back(quantity_name(q));
        }
    }

    for (int n : plan.counts) {
        const ProductEnsemble ens(plan.state, n);
        const MeasurementConfig cfg(plan.coupling, plan.tau, n);
        const auto ev = evolve_joint(ens, plan.observable, cfg, pointer);
        std::optional<Moments> after;
        auto pointer_moments = [&]() -> const Moments& {
            if (!after) {
                after = moments(pointer_distribution_after(ev));
            }
            return *after;
        };

        std::vector<double> row;
        for (auto q : plan.quantities) {
            switch (q) {
                case Quantity::orthogonal_weight:
                    row.push_back(orthogonal_weight(ev));
                    row.push_back(leading_order_weight(ens, plan.observable, cfg, sigma_q2));
                    break;
                case Quantity::infidelity:
                    row.push_back(infidelity_to_shifted(ev));
                    break;
                case Quantity::pointer_mean:
                    row.push_back(pointer_moments().mean - ev.initial_position_mean());
                    break;
                case Quantity::pointer_variance:
                    row.push_back(pointer_moments().variance);
                    break;
                case Quantity::macro_micro: {
                    if (plan.coupling == 0.0) {
                        throw DegenerateCoupling("macro_micro needs a non-zero coupling");
                    }
                    const double macro =
                        (pointer_moments().mean - ev.initial_position_mean()) / (plan.coupling * plan.tau);
                    const auto report = compare_with_macro(plan.rule, plan.state, plan.observable, macro, n, plan.seed);
                    row.push_back(report.macro_mean);
                    row.push_back(report.micro_mean);
                    row.push_back(report.z_score);
                    break;
                }
            }
        }
        table.counts.push_back(n);
        table.rows.push_back(std::move(row));
        table.in_fit.push_back(n >= plan.min_fit_count);
    }
    return table;
}

FitResult fit_power_law(std::span<const double> counts, std::span<const double> values, double min_count) {
    if (counts.size() != values.size()) {
        throw DimensionMismatch("fit_power_law: counts and values differ in length");
    }
    FitResult fit;
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        FitPoint p{counts[i], values[i], counts[i] >= min_count};
        if (p.included) {
            if (!(p.value > 0.0) || !(p.count > 0.0)) {
                throw NumericalFloor("fit_power_law: non-positive value " + format_double(p.value) + " at N=" +
                                     format_double(p.count));
            }
            sx += std::log(p.count);
            sy += std::log(p.value);
            ++n;
        }
        fit.points.push_back(p);
    }
    if (n < 2) {
        throw InvalidArgument("fit_power_law needs at least two points in the fit range");
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : fit.points) {
        if (!p.included) {
            continue;
        }
        const double dx = std::log(p.count) - mx;
        const double dy = std::log(p.value) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw InvalidArgument("fit_power_law needs at least two distinct N");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (const auto& p : fit.points) {
            if (p.included) {
                const double r = std::log(p.value) - (fit.intercept + fit.slope * std::log(p.count));
                ss_res += r * r;
            }
        }
        fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    } else {
        fit.r2 = 1.0;
    }
    return fit;
}

FitResult fit_power_law(const SweepTable& table, std::string_view column) {
    const auto values = table.column(column);
    std::vector<double> counts;
    std::vector<double> included_values;
    std::vector<FitPoint> all;
    for (std::size_t i = 0; i < values.size(); ++i) {
        all.push_back({static_cast<double>(table.counts[i]), values[i], table.in_fit[i]});
        if (table.in_fit[i]) {
            counts.push_back(table.counts[i]);
            included_values.push_back(values[i]);
        }
    }
    auto fit = fit_power_law(counts, included_values);
    fit.points = std::move(all);
    return fit;
}

std::string to_csv(const SweepTable& table) {
    std::string out = "N";
    for (const auto& c : table.columns) {
        out += ',';
        out += c;
    }
    out += ",in_fit\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out += std::to_string(table.counts[i]);
        for (double v : table.rows[i]) {
            out += ',';
            out += format_double(v);
        }
        out += table.in_fit[i] ? ",1\n" : ",0\n";
    }
    return out;
}

std::string fit_summary_json(std::string_view quantity, const FitResult& fit) {
    nlohmann::ordered_json j;
    j["quantity"] = std::string(quantity);
    j["slope"] = fit.slope;
    j["r2"] = fit.r2;
    j["n_points"] = fit.n_points();
    return j.dump(2);
}

}  // namespace bornlab
