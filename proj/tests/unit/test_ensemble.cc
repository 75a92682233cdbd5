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

#include <doctest.h>

#include <cmath>

#include "bornlab/ensemble.hpp"
#include "bornlab/errors.hpp"
#include "oracles.hpp"

using namespace bornlab;

namespace {

StateVector qubit(double p0) { return StateVector({std::sqrt(p0), std::sqrt(1.0 - p0)}); }
StateVector symmetric_qubit() { return StateVector({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}); }

std::vector<std::pair<double, double>> as_pairs(const SumDistribution& d) {
    std::vector<std::pair<double, double>> out;
    for (const auto& e : d.entries()) {
        out.emplace_back(e.value, e.prob);
    }
    return out;
}

void check_same_law(const std::vector<std::pair<double, double>>& got,
                    const std::vector<std::pair<double, double>>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i].first - want[i].first) <= 1e-9 * std::max(1.0, std::abs(want[i].first)));
        CHECK(std::abs(got[i].second - want[i].second) <= tol);
    }
}

}  // namespace

TEST_CASE("collective mean and spread") {
    const ProductEnsemble sym(symmetric_qubit(), 10);
    CHECK(std::abs(collective_mean(sym, CollectiveObservable(Observable({1.0, -1.0}), 10))) < 1e-14);

    const auto psi = qubit(0.3);
    const Observable a({2.0, 5.0});
    CHECK(std::abs(collective_mean(ProductEnsemble(psi, 1), CollectiveObservable(a, 1)) - expectation(psi, a)) < 1e-15);
    CHECK(std::abs(collective_mean(ProductEnsemble(psi, 100), CollectiveObservable(a, 100)) - 410.0) < 1e-10);

    CHECK(collective_uncertainty(ProductEnsemble(StateVector({1.0, 0.0}), 37), CollectiveObservable(a, 37)) == 0.0);
    CHECK(std::abs(collective_uncertainty(ProductEnsemble(symmetric_qubit(), 4),
                                          CollectiveObservable(Observable({1.0, -1.0}), 4)) -
                   2.0) < 1e-12);
    CHECK(std::abs(collective_uncertainty(ProductEnsemble(psi, 100), CollectiveObservable(a, 100)) -
                   10.0 * std::sqrt(1.89)) < 1e-10);

    CHECK_THROWS_AS(collective_mean(sym, CollectiveObservable(Observable({1.0, -1.0}), 9)), DimensionMismatch);
    CHECK_THROWS_AS(ProductEnsemble(symmetric_qubit(), 0), InvalidArgument);
}

TEST_CASE("sum distribution: worked examples") {
    const auto one = sum_distribution(ProductEnsemble(qubit(0.3), 1), Observable({2.0, 5.0}), ProbabilityRule::born());
    check_same_law(as_pairs(one), {{2.0, 0.3}, {5.0, 0.7}}, 1e-14);

    // Four configurations: (+,+) (+,-) (-,+) (-,-).
    const auto two = sum_distribution(ProductEnsemble(symmetric_qubit(), 2), Observable({1.0, -1.0}), ProbabilityRule::born());
    check_same_law(as_pairs(two), {{-2.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}}, 1e-14);

    // Uniform weights on d = 2 over N = 3: binomial(3, 1/2) on sums of 0/1 eigenvalues.
    const auto three = sum_distribution(ProductEnsemble(qubit(0.9), 3), Observable({0.0, 1.0}), ProbabilityRule::uniform());
    check_same_law(as_pairs(three), oracle::brute_force_sums(3, {0.5, 0.5}, {0.0, 1.0}), 1e-14);
    check_same_law(as_pairs(three), {{0.0, 0.125}, {1.0, 0.375}, {2.0, 0.375}, {3.0, 0.125}}, 1e-14);
}

TEST_CASE("sum distribution agrees with d^N enumeration for N*d <= 16") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int d = 2 + static_cast<int>(seed % 3);
        const int n = std::max(1, 16 / d - static_cast<int>(seed % 3));
        const auto inst = random_instance(d, 300 + seed);
        const auto p = born_weights(inst.state, inst.observable);
        const std::vector<double> alpha(inst.observable.eigenvalues().begin(), inst.observable.eigenvalues().end());
        const auto dist = sum_distribution(n, p, alpha);
        check_same_law(as_pairs(dist), oracle::brute_force_sums(n, p, alpha), 1e-12);
    }
}

TEST_CASE("sum distribution moments under Born weights") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int d = 2 + static_cast<int>(seed % 3);
        const int n = 1 + static_cast<int>((seed * 37) % 200);
        const auto inst = random_instance(d, 700 + seed);
        const auto dist = sum_distribution(ProductEnsemble(inst.state, n), inst.observable, ProbabilityRule::born());
        const double mean = expectation(inst.state, inst.observable);
        const double spread = uncertainty(inst.state, inst.observable);
        CHECK(std::abs(dist.total_probability() - 1.0) <= 1e-10);
        CHECK(std::abs(dist.mean() - n * mean) <= 1e-9 * std::max(1.0, std::abs(n * mean)));
        CHECK(std::abs(dist.variance() - n * spread * spread) <= 1e-9 * n * spread * spread);
        CHECK(static_cast<double>(dist.size()) <= occupation_vector_count(n, static_cast<std::size_t>(d)));
        for (std::size_t k = 1; k < dist.size(); ++k) {
            CHECK(dist.entries()[k].value > dist.entries()[k - 1].value);
        }
    }
}

TEST_CASE("sum distribution of a + b particles is the convolution of the parts") {
    const auto inst = random_instance(3, 11);
    const auto p = born_weights(inst.state, inst.observable);
    const std::vector<double> alpha(inst.observable.eigenvalues().begin(), inst.observable.eigenvalues().end());
    const double tol = 1e-9 * inst.observable.max_abs_eigenvalue();
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {4, 4}, {5, 2}}) {
        const auto whole = as_pairs(sum_distribution(a + b, p, alpha));
        const auto conv = oracle::convolve(as_pairs(sum_distribution(a, p, alpha)), as_pairs(sum_distribution(b, p, alpha)), tol);
        check_same_law(whole, conv, 1e-9);
    }
}

TEST_CASE("occupation map and merging of equal sums") {
    // alpha = (0, 1, 2) with N = 2: occupations (0,2,0) and (1,0,1) both give S = 2.
    const std::vector<double> p{0.2, 0.3, 0.5};
    const std::vector<double> alpha{0.0, 1.0, 2.0};
    const auto dist = sum_distribution(2, p, alpha);
    REQUIRE(dist.size() == 5);
    REQUIRE(dist.has_occupations());
    const auto at_two = dist.occupations(2);
    CHECK(dist.entries()[2].value == 2.0);
    CHECK(at_two.size() == 2);
    CHECK(std::abs(dist.entries()[2].prob - (0.3 * 0.3 + 2 * 0.2 * 0.5)) < 1e-15);
    CHECK(dist.occupations(0) == std::vector<std::vector<std::uint32_t>>{{2, 0, 0}});

    SumDistributionOptions lean;
    lean.keep_occupations = false;
    const auto no_occ = sum_distribution(2, p, alpha, lean);
    CHECK_FALSE(no_occ.has_occupations());
    CHECK_THROWS_AS(no_occ.occupations(0), InvalidArgument);
}

TEST_CASE("enumeration budget guard") {
    CHECK(occupation_vector_count(400, 4) == 10827401.0);
    CHECK(occupation_vector_count(5, 1) == 1.0);
    const std::vector<double> p{0.25, 0.25, 0.25, 0.25};
    const std::vector<double> alpha{0.0, 1.0, 2.5, 4.0};
    CHECK_THROWS_AS(sum_distribution(400, p, alpha), BudgetExceeded);
    SumDistributionOptions small;
    small.budget = 10;
    CHECK_THROWS_AS(sum_distribution(4, p, alpha, small), BudgetExceeded);
}

TEST_CASE("zero-probability outcomes drop out") {
    const auto dist = sum_distribution(ProductEnsemble(StateVector({1.0, 0.0}), 5), Observable({3.0, 7.0}),
                                       ProbabilityRule::born());
    REQUIRE(dist.size() == 1);
    CHECK(dist.entries()[0].value == 15.0);
    CHECK(dist.entries()[0].prob == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("perpendicular ensemble overlaps") {
    const ProductEnsemble sym(symmetric_qubit(), 12);
    const auto perp = ensemble_decompose(sym, Observable({1.0, -1.0}));
    CHECK(perp.overlap_with_product() == Complex{0.0, 0.0});
    CHECK(std::abs(perp.self_overlap() - 1.0) < 1e-14);
    CHECK(std::abs(perp.normalization() - 1.0 / std::sqrt(12.0)) < 1e-15);

    const auto raw = ensemble_decompose(sym, Observable({1.0, -1.0}), false);
    CHECK(std::abs(raw.self_overlap() - 12.0) < 1e-12);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(2 + static_cast<int>(seed % 5), 40 + seed);
        const auto pe = ensemble_decompose(ProductEnsemble(inst.state, 50), inst.observable);
        CHECK(std::abs(pe.overlap_with_product()) < 1e-10);
        CHECK(std::abs(pe.self_overlap() - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(ensemble_decompose(ProductEnsemble(StateVector({1.0, 0.0}), 3), Observable({1.0, 2.0})),
                    InvariantViolation);
}

TEST_CASE("sum distribution CSV") {
    const auto two = sum_distribution(ProductEnsemble(symmetric_qubit(), 2), Observable({1.0, -1.0}), ProbabilityRule::born());
    const auto csv = to_csv(two);
    CHECK(csv.rfind("value,prob\n", 0) == 0);
    CHECK(csv.find("\n-2,") != std::string::npos);
}
