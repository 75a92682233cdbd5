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

#include "bornlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bornlab/errors.hpp"
#include "bornlab/format.hpp"

namespace bornlab {

namespace {

void require_count(int count) {
    if (count < 1) {
        throw InvalidArgument("particle count must be >= 1, got " + std::to_string(count));
    }
}

struct RawTerm {
    double value;
    double prob;
    std::uint32_t occupation;  // index into the raw occupation table
};

// Visits every composition of `count` into `dim` non-negative parts in lexicographic order
// (first coordinate descending).
template <typename Visit>
void for_each_occupation(int count, std::size_t dim, Visit&& visit) {
    std::vector<std::uint32_t> occ(dim, 0);
    occ[0] = static_cast<std::uint32_t>(count);
    if (dim == 1) {
        visit(occ);
        return;
    }
    for (;;) {
        visit(occ);
        // Rightmost non-last slot holding units gives one unit to its right neighbour,
        // which also absorbs everything further right.
        std::size_t pos = dim - 1;
        while (pos > 0 && occ[pos - 1] == 0) {
            --pos;
        }
        if (pos == 0) {
            return;
        }
        --pos;
        std::uint32_t tail = 0;
        for (std::size_t i = pos + 1; i < dim; ++i) {
            tail += occ[i];
            occ[i] = 0;
        }
        occ[pos] -= 1;
        occ[pos + 1] = tail + 1;
    }
}

}  // namespace

ProductEnsemble::ProductEnsemble(StateVector single, int count) : single_(std::move(single)), count_(count) {
    require_count(count);
}

CollectiveObservable::CollectiveObservable(Observable single, int count) : single_(std::move(single)), count_(count) {
    require_count(count);
}

PerpendicularEnsemble::PerpendicularEnsemble(StateVector single, StateVector perp, int count, bool unit_normalized)
    : single_(std::move(single)),
      perp_(std::move(perp)),
      count_(count),
      normalization_(unit_normalized ? 1.0 / std::sqrt(static_cast<double>(count)) : 1.0) {
    require_count(count);
    if (single_.dim() != perp_.dim()) {
        throw DimensionMismatch("perpendicular ensemble: state and perp differ in dimension");
    }
}

Complex PerpendicularEnsemble::overlap_with_product() const {
    const double n = count_;
    const Complex self = inner(single_.amplitudes(), single_.amplitudes());
    const Complex cross = inner(single_.amplitudes(), perp_.amplitudes());
    return n * std::pow(self, n - 1.0) * cross * normalization_;
}

double PerpendicularEnsemble::self_overlap() const {
    // Diagonal terms r == s give <perp|perp><psi|psi>^{N-1}; off-diagonal terms carry |<psi|perp>|^2.
    const double n = count_;
    const double self = std::norm(inner(single_.amplitudes(), single_.amplitudes()));
    const double perp_self = std::real(inner(perp_.amplitudes(), perp_.amplitudes()));
    const double cross2 = std::norm(inner(single_.amplitudes(), perp_.amplitudes()));
    const double diag = n * perp_self * std::pow(std::sqrt(self), n - 1.0);
    const double off = n * (n - 1.0) * cross2 * std::pow(std::sqrt(self), std::max(n - 2.0, 0.0));
    return (diag + off) * normalization_ * normalization_;
}

PerpendicularEnsemble ensemble_decompose(const ProductEnsemble& ens, const Observable& a, bool unit_normalized) {
    auto dec = decompose(ens.single(), a);
    if (!dec.perp) {
        throw InvariantViolation("eigenstate has no perpendicular component");
    }
    return PerpendicularEnsemble(ens.single(), *dec.perp, ens.count(), unit_normalized);
}

SumDistribution::SumDistribution(std::vector<SumEntry> entries, std::size_t dim,
                                 std::vector<std::uint32_t> occupations, std::vector<std::size_t> offsets)
    : entries_(std::move(entries)), dim_(dim), occupations_(std::move(occupations)), offsets_(std::move(offsets)) {
    if (!offsets_.empty() && offsets_.size() != entries_.size() + 1) {
        throw InvalidArgument("occupation offsets must have one more element than entries");
    }
}

std::vector<std::vector<std::uint32_t>> SumDistribution::occupations(std::size_t k) const {
    if (offsets_.empty()) {
        throw InvalidArgument("distribution was built without occupation vectors");
    }
    std::vector<std::vector<std::uint32_t>> out;
    for (std::size_t i = offsets_[k]; i < offsets_[k + 1]; ++i) {
        const auto* first = occupations_.data() + i * dim_;
        out.emplace_back(first, first + dim_);
    }
    return out;
}

double SumDistribution::total_probability() const {
    double acc = 0.0;
    for (const auto& e : entries_) {
        acc += e.prob;
    }
    return acc;
}

double SumDistribution::mean() const {
    double acc = 0.0;
    for (const auto& e : entries_) {
        acc += e.prob * e.value;
    }
    return acc;
}

double SumDistribution::variance() const {
    const double m = mean();
    double acc = 0.0;
    for (const auto& e : entries_) {
        acc += e.prob * (e.value - m) * (e.value - m);
    }
    return acc;
}

double SumDistribution::max_abs_value() const {
    double m = 0.0;
    for (const auto& e : entries_) {
        m = std::max(m, std::abs(e.value));
    }
    return m;
}

double occupation_vector_count(int count, std::size_t dim) {
    if (count < 0 || dim == 0) {
        return 0.0;
    }
    // C(n + k, k) with k = dim - 1, accumulated as a product of ratios.
    const double k = static_cast<double>(dim - 1);
    double acc = 1.0;
    for (double i = 1.0; i <= k; i += 1.0) {
        acc *= (count + i) / i;
        if (!std::isfinite(acc)) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return std::round(acc);
}

double collective_mean(const ProductEnsemble& ens, const CollectiveObservable& a) {
    if (ens.count() != a.count()) {
        throw DimensionMismatch("ensemble and collective observable disagree on particle count");
    }
    return ens.count() * expectation(ens.single(), a.single());
}

double collective_uncertainty(const ProductEnsemble& ens, const CollectiveObservable& a) {
    if (ens.count() != a.count()) {
        throw DimensionMismatch("ensemble and collective observable disagree on particle count");
    }
    return std::sqrt(static_cast<double>(ens.count())) * uncertainty(ens.single(), a.single());
}

SumDistribution sum_distribution(int count, std::span<const double> probabilities,
                                 std::span<const double> eigenvalues, const SumDistributionOptions& options) {
    require_count(count);
    const std::size_t d = eigenvalues.size();
    if (d == 0 || probabilities.size() != d) {
        throw DimensionMismatch("sum_distribution: probabilities and eigenvalues must have equal, non-zero length");
    }
    const double total_occ = occupation_vector_count(count, d);
    if (total_occ > options.budget) {
        throw BudgetExceeded("sum_distribution: " + format_double(total_occ) +
                             " occupation vectors exceed the enumeration budget " + format_double(options.budget));
    }

    std::vector<double> log_p(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (!(probabilities[j] >= 0.0)) {
            throw InvalidArgument("sum_distribution: negative probability");
        }
        log_p[j] = probabilities[j] > 0.0 ? std::log(probabilities[j]) : -std::numeric_limits<double>::infinity();
    }

    const double log_n_fact = std::lgamma(count + 1.0);
    std::vector<RawTerm> terms;
    terms.reserve(static_cast<std::size_t>(total_occ));
    std::vector<std::uint32_t> raw_occ;
    if (options.keep_occupations) {
        raw_occ.reserve(static_cast<std::size_t>(total_occ) * d);
    }
    std::uint32_t index = 0;
    for_each_occupation(count, d, [&](const std::vector<std::uint32_t>& occ) {
        double log_w = log_n_fact;
        double value = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (occ[j] == 0) {
                continue;
            }
            if (probabilities[j] == 0.0) {
                return;  // impossible configuration
            }
            log_w += occ[j] * log_p[j] - std::lgamma(occ[j] + 1.0);
            value += occ[j] * eigenvalues[j];
        }
        terms.push_back({value, std::exp(log_w), index++});
        if (options.keep_occupations) {
            raw_occ.insert(raw_occ.end(), occ.begin(), occ.end());
        }
    });

    std::stable_sort(terms.begin(), terms.end(),
                     [](const RawTerm& a, const RawTerm& b) { return a.value < b.value; });

    double max_alpha = 0.0;
    for (double a : eigenvalues) {
        max_alpha = std::max(max_alpha, std::abs(a));
    }
    const double tol = kMergeRelativeTolerance * max_alpha;

    std::vector<SumEntry> entries;
    std::vector<std::uint32_t> occupations;
    std::vector<std::size_t> offsets;
    if (options.keep_occupations) {
        occupations.reserve(raw_occ.size());
        offsets.push_back(0);
    }
    std::size_t i = 0;
    while (i < terms.size()) {
        const double anchor = terms[i].value;
        double prob = 0.0;
        double weighted = 0.0;
        std::size_t j = i;
        for (; j < terms.size() && terms[j].value - anchor <= tol; ++j) {
            prob += terms[j].prob;
            weighted += terms[j].prob * terms[j].value;
            if (options.keep_occupations) {
                const auto* first = raw_occ.data() + static_cast<std::size_t>(terms[j].occupation) * d;
                occupations.insert(occupations.end(), first, first + d);
            }
        }
        // Probability-weighted value keeps the first moment exact under merging.
        const double value = (j - i == 1 || prob == 0.0) ? anchor : weighted / prob;
        entries.push_back({value, prob});
        if (options.keep_occupations) {
            offsets.push_back(occupations.size() / d);
        }
        i = j;
    }
    return SumDistribution(std::move(entries), d, std::move(occupations), std::move(offsets));
}

SumDistribution sum_distribution(const ProductEnsemble& ens, const Observable& a, const ProbabilityRule& rule,
                                 const SumDistributionOptions& options) {
    const auto p = apply_rule(rule, ens.single(), a);
    return sum_distribution(ens.count(), p, a.eigenvalues(), options);
}

std::string to_csv(const SumDistribution& dist) {
    std::string out = "value,prob\n";
    for (const auto& e : dist.entries()) {
        out += format_double(e.value);
        out += ',';
        out += format_double(e.prob);
        out += '\n';
    }
    return out;
}

}  // namespace bornlab
