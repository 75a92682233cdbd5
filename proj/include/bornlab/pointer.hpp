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

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bornlab/hilbert.hpp"

namespace bornlab {

inline constexpr double kPointerNormTolerance = 1e-8;
/// Amplitude magnitude allowed at the grid edges for a profile to count as fitting.
inline constexpr double kBoundaryTolerance = 1e-6;

/// Uniform grid on [-L, L) with M points, and its conjugate grid.
///
/// Pointer positions are -L + k h with h = 2L/M. Conjugate samples are (m - M/2) dq with
/// dq = pi / L, so both grids hold M points and h * dq = 2 pi / M.
class PointerGrid {
   public:
    PointerGrid(double extent, int points);

    /// The customary grid for a pointer of width sigma: L = 20 sigma, M = 1024.
    static PointerGrid for_sigma(double sigma) { return PointerGrid(20.0 * sigma, 1024); }

    double extent() const { return extent_; }
    int points() const { return points_; }
    double spacing() const { return 2.0 * extent_ / points_; }
    double conjugate_spacing() const;
    double position(std::size_t k) const { return -extent_ + static_cast<double>(k) * spacing(); }
    double momentum(std::size_t m) const;

    bool operator==(const PointerGrid&) const = default;

   private:
    double extent_;
    int points_;
};

/// position: amplitudes over the pointer variable Pi. momentum: over its conjugate Q.
enum class Representation { position, momentum };

/// Pointer wavefunction sampled on a grid, normalized so that sum |amp|^2 * spacing = 1.
class PointerWavefunction {
   public:
    /// Throws InvariantViolation for a bad norm and GridOverflow when the edges are not negligible.
    PointerWavefunction(PointerGrid grid, Representation rep, std::vector<Complex> amplitudes);

    const PointerGrid& grid() const { return grid_; }
    Representation rep() const { return rep_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    double spacing() const;
    double coordinate(std::size_t k) const;
    double norm_squared() const;

   private:
    PointerGrid grid_;
    Representation rep_;
    std::vector<Complex> amplitudes_;
};

/// Probability density over one of the grid representations.
struct DensityTable {
    Representation rep = Representation::position;
    double spacing = 0.0;
    std::vector<double> coordinate;
    std::vector<double> density;

    double total_mass() const;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Gaussian with density mean `center` and variance sigma^2 in the position representation.
PointerWavefunction gaussian_init(const PointerGrid& grid, double center, double sigma);

/// Unitary discrete Fourier transform between the two representations.
PointerWavefunction to_conjugate(const PointerWavefunction& w);
PointerWavefunction to_position(const PointerWavefunction& w);
PointerWavefunction to_momentum(const PointerWavefunction& w);

/// Riemann-sum mean and variance of |amp|^2 in w's own representation.
Moments moments(const PointerWavefunction& w);
Moments moments(const DensityTable& table);

DensityTable density(const PointerWavefunction& w);

/// Translates the position profile by s via the phase e^{-i q s} on the conjugate grid.
/// The result is in the same representation as w. Throws GridOverflow if the profile would leave the grid.
PointerWavefunction shift(const PointerWavefunction& w, double s);

/// Smallest and largest positions where |amp| reaches kBoundaryTolerance.
struct Support {
    double lo = 0.0;
    double hi = 0.0;
};
Support position_support(const PointerWavefunction& w);
/// True if every shift in [min_shift, max_shift] keeps the support inside the grid.
bool shifts_fit(const PointerWavefunction& w, double min_shift, double max_shift);

/// Sample-level transforms behind to_conjugate, exposed for callers that work on raw arrays.
std::vector<Complex> position_to_momentum(const PointerGrid& grid, std::span<const Complex> position_amps);
std::vector<Complex> momentum_to_position(const PointerGrid& grid, std::span<const Complex> momentum_amps);

/// "position,re,im" or "momentum,re,im".
std::string to_csv(const PointerWavefunction& w);
/// "position,density" or "momentum,density".
std::string to_csv(const DensityTable& table);

}  // namespace bornlab
