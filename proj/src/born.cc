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

#include "bornlab/born.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <random>

#include "bornlab/ensemble.hpp"
#include "bornlab/errors.hpp"
#include "bornlab/format.hpp"

namespace bornlab {

namespace {

double weighted_mean(std::span<const double> p, std::span<const double> alpha) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        acc += p[j] * alpha[j];
    }
    return acc;
}

}  // namespace

double OutcomeCounts::mean(std::span<const double> eigenvalues) const {
    if (counts.size() != eigenvalues.size()) {
        throw DimensionMismatch("outcome counts and eigenvalues differ in length");
    }
    if (total == 0) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        acc += static_cast<double>(counts[j]) * eigenvalues[j];
    }
    return acc / static_cast<double>(total);
}

double consistency_residual(const ProbabilityRule& rule, const StateVector& psi, const Observable& a) {
    const auto p = apply_rule(rule, psi, a);
    const auto born = born_weights(psi, a);
    const auto alpha = a.eigenvalues();
    return std::abs(weighted_mean(p, alpha) - weighted_mean(born, alpha));
}

bool spectra_span_simplex(std::span<const std::vector<double>> spectra, std::size_t dim) {
    if (dim <= 1) {
        return true;
    }
    if (spectra.size() < dim - 1) {
        return false;
    }
    Eigen::MatrixXd centered(static_cast<Eigen::Index>(spectra.size()), static_cast<Eigen::Index>(dim - 1));
    double scale = 0.0;
    for (std::size_t s = 0; s < spectra.size(); ++s) {
        if (spectra[s].size() != dim) {
            throw DimensionMismatch("spectrum " + std::to_string(s) + " has the wrong length");
        }
        for (std::size_t j = 0; j + 1 < dim; ++j) {
            const double v = spectra[s][j] - spectra[s][dim - 1];
            centered(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = v;
            scale = std::max(scale, std::abs(v));
        }
    }
    if (scale == 0.0) {
        return false;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(centered);
    lu.setThreshold(1e-9);
    return static_cast<std::size_t>(lu.rank()) == dim - 1;
}

std::vector<std::vector<double>> uniqueness_scan(const StateVector& psi, std::span<const std::vector<double>> spectra,
                                                 double grid_step) {
    const std::size_t d = psi.dim();
    if (!(grid_step > 0.0) || grid_step > 1.0) {
        throw InvalidArgument("grid_step must lie in (0, 1]");
    }
    const double k_real = 1.0 / grid_step;
    const auto k_total = static_cast<std::int64_t>(std::llround(k_real));
    if (std::abs(k_real - static_cast<double>(k_total)) > 1e-9 * k_real) {
        throw InvalidArgument("grid_step must divide 1");
    }
    for (const auto& s : spectra) {
        if (s.size() != d) {
            throw DimensionMismatch("spectrum length differs from the state dimension");
        }
    }
    if (!spectra_span_simplex(spectra, d)) {
        throw SpanConditionFailed("centered spectra do not span a " + std::to_string(d - 1) +
                                  "-dimensional space; uniqueness cannot be certified");
    }
    const double points = occupation_vector_count(static_cast<int>(k_total), d);
    if (points > kEnumerationBudget) {
        throw BudgetExceeded("simplex scan would visit " + format_double(points) + " points");
    }

    std::vector<double> born(d);
    for (std::size_t j = 0; j < d; ++j) {
        born[j] = std::norm(psi[j]);
    }
    std::vector<double> targets;
    for (const auto& s : spectra) {
        targets.push_back(weighted_mean(born, s));
    }

    std::vector<std::vector<double>> hits;
    std::vector<std::int64_t> ks(d, 0);
    std::vector<double> p(d);
    // Depth-first over compositions of k_total into d parts.
    auto visit = [&](auto&& self, std::size_t slot, std::int64_t remaining) -> void {
        if (slot + 1 == d) {
            ks[slot] = remaining;
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = static_cast<double>(ks[j]) / static_cast<double>(k_total);
            }
            for (std::size_t s = 0; s < spectra.size(); ++s) {
                if (!(std::abs(weighted_mean(p, spectra[s]) - targets[s]) <= kConsistencyTolerance)) {
                    return;
                }
            }
            hits.push_back(p);
            return;
        }
        for (std::int64_t k = remaining; k >= 0; --k) {
            ks[slot] = k;
            self(self, slot + 1, remaining - k);
        }
    };
    visit(visit, 0, k_total);
    return hits;
}

OutcomeCounts sample_outcomes(const ProbabilityRule& rule, const StateVector& psi, const Observable& a,
                              std::int64_t count, std::uint64_t seed) {
    if (count < 1) {
        throw InvalidArgument("sample_outcomes: count must be >= 1");
    }
    const auto p = apply_rule(rule, psi, a);
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
    OutcomeCounts out;
    out.counts.assign(p.size(), 0);
    out.total = count;
    for (std::int64_t i = 0; i < count; ++i) {
        ++out.counts[pick(rng)];
    }
    return out;
}

MacroMicroReport compare_with_macro(const ProbabilityRule& rule, const StateVector& psi, const Observable& a,
                                    double macro_mean, std::int64_t count, std::uint64_t seed) {
    const auto counts = sample_outcomes(rule, psi, a, count, seed);
    const auto alpha = a.eigenvalues();
    const auto p = apply_rule(rule, psi, a);
    const double rule_mean = weighted_mean(p, alpha);
    double rule_var = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        rule_var += p[j] * (alpha[j] - rule_mean) * (alpha[j] - rule_mean);
    }
    double spread = std::sqrt(rule_var);
    if (!(spread > 1e-15)) {
        spread = uncertainty(psi, a);
    }

    MacroMicroReport r;
    r.rule = std::string(rule_name(rule.tag));
    r.macro_mean = macro_mean;
    r.micro_mean = counts.mean(alpha);
    const double diff = r.micro_mean - r.macro_mean;
    if (spread > 1e-15) {
        r.z_score = diff / (spread / std::sqrt(static_cast<double>(count)));
    } else {
        // Both the rule and the state are sharp: any disagreement beyond rounding is decisive.
        const double scale = std::max(1.0, a.max_abs_eigenvalue());
        r.z_score = std::abs(diff) <= 1e-9 * scale ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    r.consistent = std::abs(r.z_score) <= kVerdictThreshold;
    return r;
}

MacroMicroReport macro_micro_test(const ProbabilityRule& rule, const StateVector& psi, const Observable& a,
                                  const MeasurementConfig& cfg, const PointerWavefunction& w, std::uint64_t seed) {
    if (cfg.coupling() == 0.0) {
        throw DegenerateCoupling("coupling is zero: the pointer records nothing");
    }
    const ProductEnsemble ens(psi, cfg.count());
    const auto ev = evolve_joint(ens, a, cfg, w);
    const double macro = mean_shift(ev) / (cfg.coupling() * cfg.tau());
    return compare_with_macro(rule, psi, a, macro, cfg.count(), seed);
}

std::string to_json(const MacroMicroReport& report) {
    nlohmann::ordered_json j;
    j["rule"] = report.rule;
    j["macro_mean"] = report.macro_mean;
    j["micro_mean"] = report.micro_mean;
    if (std::isfinite(report.z_score)) {
        j["z_score"] = report.z_score;
    } else {
        j["z_score"] = report.z_score > 0 ? "inf" : "-inf";
    }
    j["verdict"] = report.consistent ? "consistent" : "inconsistent";
    return j.dump(2);
}

}  // namespace bornlab
