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

#include "bornlab/hilbert.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bornlab/errors.hpp"

namespace bornlab {

namespace {

using MatrixXcd = Eigen::MatrixXcd;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

void check_nondegenerate(std::span<const double> eigenvalues, double floor) {
    std::vector<double> sorted(eigenvalues.begin(), eigenvalues.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (!(sorted[k] - sorted[k - 1] > floor)) {
            throw InvariantViolation("observable spectrum is degenerate (gap " +
                                     std::to_string(sorted[k] - sorted[k - 1]) + ")");
        }
    }
}

MatrixXcd as_matrix(std::span<const Complex> row_major, std::size_t dim) {
    MatrixXcd m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            m(r, c) = row_major[r * dim + c];
        }
    }
    return m;
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw InvalidArgument("state vector must have dimension >= 1");
    }
    double total = 0.0;
    for (const auto& z : amplitudes_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvalidArgument("state vector has non-finite amplitude");
        }
        total += std::norm(z);
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw InvariantViolation("state vector not normalized: sum |b|^2 = " + std::to_string(total));
    }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    const double n = norm(amplitudes);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidArgument("cannot normalize a zero or non-finite vector");
    }
    for (auto& z : amplitudes) {
        z /= n;
    }
    return StateVector(std::move(amplitudes));
}

Observable::Observable(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty()) {
        throw InvalidArgument("observable must have dimension >= 1");
    }
    for (double a : eigenvalues_) {
        if (!std::isfinite(a)) {
            throw InvalidArgument("observable has non-finite eigenvalue");
        }
    }
    check_nondegenerate(eigenvalues_, 0.0);
}

Observable::Observable(std::vector<double> eigenvalues, std::vector<Complex> basis_row_major)
    : Observable(std::move(eigenvalues)) {
    const std::size_t d = dim();
    if (basis_row_major.size() != d * d) {
        throw DimensionMismatch("basis must have d*d entries");
    }
    const MatrixXcd b = as_matrix(basis_row_major, d);
    const double err = (b.adjoint() * b - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > kIdentityTolerance) {
        throw InvariantViolation("observable basis is not unitary (deviation " + std::to_string(err) + ")");
    }
    basis_ = std::move(basis_row_major);
}

Observable Observable::from_hermitian(std::span<const Complex> matrix_row_major, std::size_t dim) {
    if (dim == 0 || matrix_row_major.size() != dim * dim) {
        throw DimensionMismatch("hermitian matrix must have d*d entries with d >= 1");
    }
    const MatrixXcd m = as_matrix(matrix_row_major, dim);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kIdentityTolerance * scale) {
        throw InvariantViolation("matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw InvariantViolation("eigendecomposition failed");
    }
    std::vector<double> eigenvalues(dim);
    std::vector<Complex> basis(dim * dim);
    for (std::size_t c = 0; c < dim; ++c) {
        eigenvalues[c] = solver.eigenvalues()(static_cast<Eigen::Index>(c));
        for (std::size_t r = 0; r < dim; ++r) {
            basis[r * dim + c] = solver.eigenvectors()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    check_nondegenerate(eigenvalues, kHermitianGapFloor);
    return Observable(std::move(eigenvalues), std::move(basis));
}

Complex Observable::basis_entry(std::size_t row, std::size_t col) const {
    if (basis_.empty()) {
        return row == col ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    }
    return basis_[row * dim() + col];
}

double Observable::max_abs_eigenvalue() const {
    double m = 0.0;
    for (double a : eigenvalues_) {
        m = std::max(m, std::abs(a));
    }
    return m;
}

std::vector<Complex> Observable::to_eigenbasis(std::span<const Complex> v) const {
    require_same_dim(v.size(), dim(), "to_eigenbasis");
    if (basis_.empty()) {
        return {v.begin(), v.end()};
    }
    const std::size_t d = dim();
    std::vector<Complex> out(d);
    for (std::size_t k = 0; k < d; ++k) {
        Complex acc{};
        for (std::size_t r = 0; r < d; ++r) {
            acc += std::conj(basis_[r * d + k]) * v[r];
        }
        out[k] = acc;
    }
    return out;
}

std::vector<Complex> Observable::from_eigenbasis(std::span<const Complex> b) const {
    require_same_dim(b.size(), dim(), "from_eigenbasis");
    if (basis_.empty()) {
        return {b.begin(), b.end()};
    }
    const std::size_t d = dim();
    std::vector<Complex> out(d);
    for (std::size_t r = 0; r < d; ++r) {
        Complex acc{};
        for (std::size_t k = 0; k < d; ++k) {
            acc += basis_[r * d + k] * b[k];
        }
        out[r] = acc;
    }
    return out;
}

std::vector<Complex> Observable::apply(std::span<const Complex> v) const {
    auto b = to_eigenbasis(v);
    for (std::size_t k = 0; k < b.size(); ++k) {
        b[k] *= eigenvalues_[k];
    }
    return from_eigenbasis(b);
}

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket) {
    require_same_dim(bra.size(), ket.size(), "inner");
    Complex acc{};
    for (std::size_t k = 0; k < bra.size(); ++k) {
        acc += std::conj(bra[k]) * ket[k];
    }
    return acc;
}

double norm(std::span<const Complex> v) {
    double acc = 0.0;
    for (const auto& z : v) {
        acc += std::norm(z);
    }
    return std::sqrt(acc);
}

std::vector<Complex> eigen_amplitudes(const StateVector& psi, const Observable& a) {
    require_same_dim(psi.dim(), a.dim(), "state/observable");
    return a.to_eigenbasis(psi.amplitudes());
}

std::vector<double> born_weights(const StateVector& psi, const Observable& a) {
    const auto b = eigen_amplitudes(psi, a);
    std::vector<double> w(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        w[j] = std::norm(b[j]);
    }
    return w;
}

double expectation(const StateVector& psi, const Observable& a) {
    const auto w = born_weights(psi, a);
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        acc += w[j] * a.eigenvalues()[j];
    }
    return acc;
}

double uncertainty(const StateVector& psi, const Observable& a) {
    const auto w = born_weights(psi, a);
    if (a.dim() == 1) {
        return 0.0;
    }
    const double mean = expectation(psi, a);
    // Centered second moment; equals <A^2> - mean^2 without the cancellation.
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double dev = a.eigenvalues()[j] - mean;
        acc += w[j] * dev * dev;
    }
    return std::sqrt(std::max(acc, 0.0));
}

Decomposition decompose(const StateVector& psi, const Observable& a) {
    Decomposition dec;
    dec.mean = expectation(psi, a);
    dec.uncertainty = uncertainty(psi, a);
    if (dec.uncertainty <= kNormTolerance) {
        return dec;
    }
    auto b = eigen_amplitudes(psi, a);
    for (std::size_t j = 0; j < b.size(); ++j) {
        b[j] *= (a.eigenvalues()[j] - dec.mean) / dec.uncertainty;
    }
    // (A - mean)|psi> / uncertainty has unit norm up to rounding.
    dec.perp = StateVector::normalized(a.from_eigenbasis(b));
    return dec;
}

double reconstruction_residual(const StateVector& psi, const Observable& a, const Decomposition& dec) {
    auto r = a.apply(psi.amplitudes());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] -= dec.mean * psi[k];
        if (dec.perp) {
            r[k] -= dec.uncertainty * (*dec.perp)[k];
        }
    }
    return norm(r);
}

Instance random_instance(int dim, std::uint64_t seed) {
    if (dim < 1) {
        throw InvalidArgument("random_instance: dim must be >= 1");
    }
    const auto d = static_cast<std::size_t>(dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> spectrum(-5.0, 5.0);

    std::vector<Complex> amps(d);
    for (auto& z : amps) {
        z = {gauss(rng), gauss(rng)};
    }
    auto state = StateVector::normalized(std::move(amps));

    std::vector<double> eigenvalues(d);
    for (;;) {
        for (auto& a : eigenvalues) {
            a = spectrum(rng);
        }
        std::vector<double> sorted = eigenvalues;
        std::sort(sorted.begin(), sorted.end());
        bool ok = true;
        for (std::size_t k = 1; k < d; ++k) {
            ok = ok && sorted[k] - sorted[k - 1] >= 1e-3;
        }
        if (ok) {
            break;
        }
    }

    MatrixXcd g(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            g(r, c) = Complex{gauss(rng), gauss(rng)};
        }
    }
    Eigen::HouseholderQR<MatrixXcd> qr(g);
    MatrixXcd q = qr.householderQ();
    const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    std::vector<Complex> basis(d * d);
    for (std::size_t c = 0; c < d; ++c) {
        const Complex diag = r(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
        const Complex phase = std::abs(diag) > 0.0 ? diag / std::abs(diag) : Complex{1.0, 0.0};
        for (std::size_t row = 0; row < d; ++row) {
            basis[row * d + c] = q(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) * phase;
        }
    }
    return Instance{std::move(state), Observable(std::move(eigenvalues), std::move(basis))};
}

}  // namespace bornlab
