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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bornlab {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kHermitianGapFloor = 1e-8;

/// Normalized pure state of a single d-level particle.
class StateVector {
   public:
    /// Takes ownership of amplitudes; throws InvariantViolation unless the norm is 1 within 1e-12.
    explicit StateVector(std::vector<Complex> amplitudes);

    /// Rescales a non-zero vector to unit norm.
    static StateVector normalized(std::vector<Complex> amplitudes);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t j) const { return amplitudes_[j]; }

   private:
    std::vector<Complex> amplitudes_;
};

/// Non-degenerate observable held spectrally: A = B diag(alpha) B^dagger.
///
/// The basis columns are the eigenvectors expressed in the computational basis.
/// An absent basis means the identity, i.e. states are already written in the eigenbasis.
class Observable {
   public:
    explicit Observable(std::vector<double> eigenvalues);
    /// basis_row_major holds d*d entries; column k is the eigenvector of eigenvalues[k].
    Observable(std::vector<double> eigenvalues, std::vector<Complex> basis_row_major);

    /// Diagonalizes a dense Hermitian matrix (row-major, d*d entries).
    /// Rejects non-Hermitian input and spectra with a gap below 1e-8.
    static Observable from_hermitian(std::span<const Complex> matrix_row_major, std::size_t dim);

    std::size_t dim() const { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    bool has_basis() const { return !basis_.empty(); }
    /// Row-major basis matrix; empty when the basis is the identity.
    std::span<const Complex> basis() const { return basis_; }
    Complex basis_entry(std::size_t row, std::size_t col) const;
    double max_abs_eigenvalue() const;

    /// Coordinates b_j = <a_j|v> of a vector in the eigenbasis.
    std::vector<Complex> to_eigenbasis(std::span<const Complex> v) const;
    /// Inverse of to_eigenbasis.
    std::vector<Complex> from_eigenbasis(std::span<const Complex> b) const;
    /// A|v> in the computational basis.
    std::vector<Complex> apply(std::span<const Complex> v) const;

   private:
    std::vector<double> eigenvalues_;
    std::vector<Complex> basis_;
};

struct Decomposition {
    double mean = 0.0;
    double uncertainty = 0.0;
    /// Absent when the state is an eigenstate (uncertainty <= 1e-12).
    std::optional<StateVector> perp;
};

struct Instance {
    StateVector state;
    Observable observable;
};

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket);
double norm(std::span<const Complex> v);

/// Amplitudes of psi in A's eigenbasis.
std::vector<Complex> eigen_amplitudes(const StateVector& psi, const Observable& a);
/// |b_j|^2 in A's eigenbasis.
std::vector<double> born_weights(const StateVector& psi, const Observable& a);

double expectation(const StateVector& psi, const Observable& a);
double uncertainty(const StateVector& psi, const Observable& a);

/// Splits A|psi> into a component along psi and a normalized orthogonal remainder:
/// A|psi> = mean |psi> + uncertainty |perp>, with uncertainty >= 0.
Decomposition decompose(const StateVector& psi, const Observable& a);

/// ||A|psi> - mean|psi> - uncertainty|perp>||, zero-perp treated as the zero vector.
double reconstruction_residual(const StateVector& psi, const Observable& a, const Decomposition& dec);

/// Seeded random state and observable with a random unitary eigenbasis and spectral gaps >= 1e-3.
Instance random_instance(int dim, std::uint64_t seed);

}  // namespace bornlab
