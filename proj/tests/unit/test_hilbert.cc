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
#include <random>

#include "bornlab/errors.hpp"
#include "bornlab/hilbert.hpp"
#include "bornlab/serialization.hpp"

using namespace bornlab;

namespace {

StateVector qubit(double p0) { return StateVector({std::sqrt(p0), std::sqrt(1.0 - p0)}); }

StateVector symmetric_qubit() { return StateVector({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}); }

}  // namespace

TEST_CASE("expectation matches direct arithmetic") {
    CHECK(expectation(StateVector({1.0, 0.0}), Observable({3.0, 7.0})) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(expectation(symmetric_qubit(), Observable({1.0, -1.0}))) < 1e-15);
    // 0.3 * 2 + 0.7 * 5
    CHECK(std::abs(expectation(qubit(0.3), Observable({2.0, 5.0})) - 4.1) < 1e-12);
}

TEST_CASE("uncertainty matches direct arithmetic") {
    CHECK(uncertainty(StateVector({1.0, 0.0}), Observable({3.0, 7.0})) == 0.0);
    CHECK(std::abs(uncertainty(symmetric_qubit(), Observable({1.0, -1.0})) - 1.0) < 1e-12);
    // <A^2> = 0.3 * 4 + 0.7 * 25 = 18.7, mean^2 = 16.81
    CHECK(std::abs(uncertainty(qubit(0.3), Observable({2.0, 5.0})) - std::sqrt(1.89)) < 1e-12);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(expectation(symmetric_qubit(), Observable({1.0, 2.0, 3.0})), DimensionMismatch);
    CHECK_THROWS_AS(uncertainty(symmetric_qubit(), Observable({1.0})), DimensionMismatch);
    CHECK_THROWS_AS(decompose(symmetric_qubit(), Observable({1.0})), DimensionMismatch);
}

TEST_CASE("decompose: symmetric qubit") {
    const auto dec = decompose(symmetric_qubit(), Observable({1.0, -1.0}));
    CHECK(std::abs(dec.mean) < 1e-15);
    CHECK(std::abs(dec.uncertainty - 1.0) < 1e-12);
    REQUIRE(dec.perp);
    CHECK(std::abs((*dec.perp)[0] - Complex(1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs((*dec.perp)[1] - Complex(-1.0 / std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("decompose: eigenstate has no perpendicular part") {
    const auto dec = decompose(StateVector({1.0, 0.0}), Observable({3.0, 7.0}));
    CHECK(dec.mean == 3.0);
    CHECK(dec.uncertainty == 0.0);
    CHECK_FALSE(dec.perp.has_value());
    CHECK(reconstruction_residual(StateVector({1.0, 0.0}), Observable({3.0, 7.0}), dec) < 1e-15);
}

TEST_CASE("decompose: asymmetric qubit against (A - mean)|psi> normalized") {
    const auto psi = qubit(0.3);
    const Observable a({2.0, 5.0});
    const auto dec = decompose(psi, a);
    // Oracle: (alpha_j - 4.1) b_j, normalized by hand.
    const double r0 = (2.0 - 4.1) * std::sqrt(0.3);
    const double r1 = (5.0 - 4.1) * std::sqrt(0.7);
    const double n = std::sqrt(r0 * r0 + r1 * r1);
    REQUIRE(dec.perp);
    CHECK(std::abs((*dec.perp)[0] - Complex(r0 / n)) < 1e-12);
    CHECK(std::abs((*dec.perp)[1] - Complex(r1 / n)) < 1e-12);
    CHECK(std::abs(dec.uncertainty - n) < 1e-12);
    CHECK(reconstruction_residual(psi, a, dec) < 1e-12);
}

TEST_CASE("random_instance is deterministic and valid") {
    const auto a = random_instance(2, 42);
    const auto b = random_instance(2, 42);
    CHECK(instance_to_json(a.state, a.observable) == instance_to_json(b.state, b.observable));
    CHECK(instance_to_json(a.state, a.observable) !=
          instance_to_json(random_instance(2, 43).state, random_instance(2, 43).observable));

    const auto one = random_instance(1, 7);
    CHECK(one.state.dim() == 1);
    CHECK(std::abs(std::abs(one.state[0]) - 1.0) < 1e-12);
    CHECK(one.observable.eigenvalues().size() == 1);

    const auto big = random_instance(16, 3);
    // Re-validating through the constructors is the invariant check.
    CHECK_NOTHROW(StateVector(std::vector<Complex>(big.state.amplitudes().begin(), big.state.amplitudes().end())));
    CHECK_NOTHROW(Observable(std::vector<double>(big.observable.eigenvalues().begin(), big.observable.eigenvalues().end()),
                             std::vector<Complex>(big.observable.basis().begin(), big.observable.basis().end())));
    auto sorted = std::vector<double>(big.observable.eigenvalues().begin(), big.observable.eigenvalues().end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        CHECK(sorted[k] - sorted[k - 1] >= 1e-3);
    }
    CHECK_THROWS_AS(random_instance(0, 1), InvalidArgument);
}

TEST_CASE("decomposition invariants over seeded random instances") {
    // Property sweep: identity, orthogonality, Pythagoras.
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const int d = 2 + static_cast<int>(seed % 15);
        const auto inst = random_instance(d, 1000 + seed);
        const auto dec = decompose(inst.state, inst.observable);
        REQUIRE(dec.perp);
        CHECK(reconstruction_residual(inst.state, inst.observable, dec) <= 1e-10);
        CHECK(std::abs(inner(inst.state.amplitudes(), dec.perp->amplitudes())) <= 1e-10);
        const double lhs = std::pow(norm(inst.observable.apply(inst.state.amplitudes())), 2);
        CHECK(std::abs(lhs - (dec.mean * dec.mean + dec.uncertainty * dec.uncertainty)) <= 1e-10 * std::max(1.0, lhs));
    }
}

TEST_CASE("mean and spread are invariant under a change of basis") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int d = 2 + static_cast<int>(seed % 7);
        const auto inst = random_instance(d, 5000 + seed);
        // A random unitary V from another instance's eigenbasis.
        const auto rot = random_instance(d, 9000 + seed).observable;
        const auto du = static_cast<std::size_t>(d);
        std::vector<Complex> new_basis(du * du);
        for (std::size_t r = 0; r < du; ++r) {
            for (std::size_t c = 0; c < du; ++c) {
                Complex acc{};
                for (std::size_t k = 0; k < du; ++k) {
                    acc += rot.basis_entry(r, k) * inst.observable.basis_entry(k, c);
                }
                new_basis[r * du + c] = acc;
            }
        }
        std::vector<Complex> new_state(du);
        for (std::size_t r = 0; r < du; ++r) {
            for (std::size_t k = 0; k < du; ++k) {
                new_state[r] += rot.basis_entry(r, k) * inst.state[k];
            }
        }
        const Observable moved(std::vector<double>(inst.observable.eigenvalues().begin(), inst.observable.eigenvalues().end()),
                               new_basis);
        const auto psi = StateVector::normalized(new_state);
        CHECK(std::abs(expectation(psi, moved) - expectation(inst.state, inst.observable)) <= 1e-10);
        CHECK(std::abs(uncertainty(psi, moved) - uncertainty(inst.state, inst.observable)) <= 1e-10);
    }
}

TEST_CASE("observable from a Hermitian matrix") {
    // Pauli X: eigenvalues -1, +1.
    const std::vector<Complex> x{0.0, 1.0, 1.0, 0.0};
    const auto a = Observable::from_hermitian(x, 2);
    CHECK(std::abs(a.eigenvalues()[0] + 1.0) < 1e-12);
    CHECK(std::abs(a.eigenvalues()[1] - 1.0) < 1e-12);
    const auto plus = StateVector({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
    CHECK(std::abs(expectation(plus, a) - 1.0) < 1e-12);
    CHECK(uncertainty(plus, a) < 1e-7);

    const std::vector<Complex> degenerate{1.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(Observable::from_hermitian(degenerate, 2), InvariantViolation);
    const std::vector<Complex> not_hermitian{0.0, 1.0, 2.0, 0.0};
    CHECK_THROWS_AS(Observable::from_hermitian(not_hermitian, 2), InvariantViolation);
}

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(StateVector({1.0, 1.0}), InvariantViolation);
    CHECK_THROWS_AS(StateVector(std::vector<Complex>{}), InvalidArgument);
    CHECK_THROWS_AS(Observable({1.0, 1.0}), InvariantViolation);
    CHECK_THROWS_AS(Observable({1.0, 2.0}, {1.0, 1.0, 0.0, 1.0}), InvariantViolation);
}

TEST_CASE("JSON round trip preserves the instance") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(1 + static_cast<int>(seed % 6), seed);
        const auto text = instance_to_json(inst.state, inst.observable);
        const auto back = instance_from_json(text);
        CHECK(instance_to_json(back.state, back.observable) == text);
    }
    const auto identity = instance_from_json(R"({"amplitudes": [[1,0],[0,0]], "eigenvalues": [3, 7]})");
    CHECK_FALSE(identity.observable.has_basis());
    CHECK_THROWS_AS(instance_from_json("{\"amplitudes\": 3}"), InvalidArgument);
    CHECK_THROWS_AS(instance_from_json("not json"), InvalidArgument);
}
