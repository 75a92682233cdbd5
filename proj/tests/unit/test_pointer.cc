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
#include <numbers>

#include "bornlab/errors.hpp"
#include "bornlab/pointer.hpp"
#include "oracles.hpp"

using namespace bornlab;

namespace {

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(PointerGrid(20.0, 1000), InvalidArgument);
    CHECK_THROWS_AS(PointerGrid(20.0, 32), InvalidArgument);
    CHECK_THROWS_AS(PointerGrid(-1.0, 1024), InvalidArgument);
    const PointerGrid g(20.0, 1024);
    CHECK(g.spacing() * g.conjugate_spacing() == doctest::Approx(2.0 * std::numbers::pi / 1024));
}

TEST_CASE("gaussian_init moments") {
    const PointerGrid grid(20.0, 1024);
    const auto w = gaussian_init(grid, 0.0, 1.0);
    CHECK(std::abs(w.norm_squared() - 1.0) < 1e-12);
    auto m = moments(w);
    CHECK(std::abs(m.mean) < 1e-6);
    CHECK(std::abs(m.variance - 1.0) < 1e-6);

    m = moments(gaussian_init(grid, 3.0, 1.0));
    CHECK(std::abs(m.mean - 3.0) < 1e-6);

    // Quadrature oracle for the variance of a sigma = 0.5 profile.
    const double sigma = 0.5;
    const double want = oracle::simpson([&](double x) { return x * x * oracle::gaussian_density(x, 0.0, sigma); }, -10, 10);
    m = moments(gaussian_init(grid, 0.0, sigma));
    CHECK(std::abs(want - 0.25) < 1e-9);
    CHECK(std::abs(m.variance - want) < 1e-6);
}

TEST_CASE("gaussian_init rejects profiles that do not fit") {
    const PointerGrid grid(20.0, 1024);
    CHECK_THROWS_AS(gaussian_init(grid, 18.0, 1.0), GridOverflow);
    CHECK_THROWS_AS(gaussian_init(grid, 13.0, 1.0), GridOverflow);  // inside +-4 sigma but edge amplitude too big
    CHECK_THROWS_AS(gaussian_init(grid, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("conjugate transform: round trip and Parseval") {
    const PointerGrid grid(20.0, 1024);
    for (double c : {0.0, 1.5, -4.0}) {
        for (double s : {0.5, 1.0, 2.0}) {
            const auto w = gaussian_init(grid, c, s);
            const auto q = to_conjugate(w);
            CHECK(q.rep() == Representation::momentum);
            CHECK(std::abs(q.norm_squared() - w.norm_squared()) < 1e-10);
            const auto back = to_conjugate(q);
            CHECK(back.rep() == Representation::position);
            CHECK(max_diff(back.amplitudes(), w.amplitudes()) < 1e-10);
        }
    }
}

TEST_CASE("conjugate transform matches the direct sum") {
    const PointerGrid grid(10.0, 128);
    const auto w = gaussian_init(grid, 1.25, 0.8);
    const auto direct = oracle::direct_position_to_momentum(grid.extent(), {w.amplitudes().begin(), w.amplitudes().end()});
    CHECK(max_diff(to_conjugate(w).amplitudes(), direct) < 1e-12);
}

TEST_CASE("Gaussian of width sigma maps to width 1/(2 sigma) in the conjugate variable") {
    const PointerGrid grid(20.0, 1024);
    for (double sigma : {0.5, 1.0, 2.0}) {
        const auto q = to_conjugate(gaussian_init(grid, 0.0, sigma));
        const double want_var = oracle::simpson(
            [&](double x) { return x * x * oracle::gaussian_momentum_density(x, sigma); }, -20.0 / sigma, 20.0 / sigma);
        CHECK(std::abs(moments(q).variance - want_var) < 1e-6);
        CHECK(std::abs(want_var - 1.0 / (4.0 * sigma * sigma)) < 1e-9);
        for (std::size_t m = 0; m < 1024; m += 37) {
            const double analytic = std::sqrt(oracle::gaussian_momentum_density(grid.momentum(m), sigma));
            CHECK(std::abs(std::abs(q.amplitudes()[m]) - analytic) < 1e-6);
        }
    }
}

TEST_CASE("shifted Gaussian has the same magnitude in Q with a linear phase") {
    const PointerGrid grid(20.0, 1024);
    const auto q0 = to_conjugate(gaussian_init(grid, 0.0, 1.0));
    const auto q3 = to_conjugate(gaussian_init(grid, 3.0, 1.0));
    for (std::size_t m = 0; m < 1024; ++m) {
        const Complex expected = q0.amplitudes()[m] * std::polar(1.0, -grid.momentum(m) * 3.0);
        CHECK(std::abs(q3.amplitudes()[m] - expected) < 1e-10);
    }
}

TEST_CASE("shift") {
    const PointerGrid grid(20.0, 1024);
    const auto w = gaussian_init(grid, 0.0, 1.0);
    CHECK(max_diff(shift(w, 0.0).amplitudes(), w.amplitudes()) < 1e-12);
    CHECK(std::abs(moments(shift(w, 2.5)).mean - 2.5) < 1e-8);
    CHECK(max_diff(shift(shift(w, 1.7), -1.7).amplitudes(), w.amplitudes()) < 1e-10);
    // Composition.
    CHECK(max_diff(shift(shift(w, 1.3), 2.1).amplitudes(), shift(w, 3.4).amplitudes()) < 1e-9);
    // Off-grid shift matches an analytic Gaussian at the new center.
    const auto moved = shift(w, 0.37);
    const auto analytic = gaussian_init(grid, 0.37, 1.0);
    CHECK(max_diff(moved.amplitudes(), analytic.amplitudes()) < 1e-10);
    // Momentum-representation input stays in momentum representation.
    const auto mq = shift(to_conjugate(w), 2.0);
    CHECK(mq.rep() == Representation::momentum);
    CHECK(std::abs(moments(to_conjugate(mq)).mean - 2.0) < 1e-8);

    CHECK_THROWS_AS(shift(w, 15.0), GridOverflow);
    CHECK_THROWS_AS(shift(w, -15.0), GridOverflow);
}

TEST_CASE("wavefunction invariants") {
    const PointerGrid grid(20.0, 64);
    std::vector<Complex> flat(64, Complex{1.0 / std::sqrt(40.0), 0.0});
    CHECK_THROWS_AS(PointerWavefunction(grid, Representation::position, flat), GridOverflow);
    std::vector<Complex> zero(64, Complex{});
    CHECK_THROWS_AS(PointerWavefunction(grid, Representation::position, zero), InvariantViolation);
}

TEST_CASE("pointer CSV headers") {
    const auto w = gaussian_init(PointerGrid(20.0, 64), 0.0, 1.0);
    CHECK(to_csv(w).rfind("position,re,im\n", 0) == 0);
    CHECK(to_csv(to_conjugate(w)).rfind("momentum,re,im\n", 0) == 0);
    CHECK(to_csv(density(w)).rfind("position,density\n", 0) == 0);
}
