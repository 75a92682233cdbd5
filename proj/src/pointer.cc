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

#include "bornlab/pointer.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bornlab/errors.hpp"
#include "bornlab/format.hpp"

namespace bornlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// One FFTW plan over an owned buffer. Plans are built with FFTW_ESTIMATE so the
// arithmetic, and therefore every output bit, does not depend on timing.
class FftPlan {
   public:
    FftPlan(int n, int sign) : n_(n) {
        buf_ = fftw_alloc_complex(static_cast<std::size_t>(n));
        plan_ = fftw_plan_dft_1d(n, buf_, buf_, sign, FFTW_ESTIMATE);
    }
    ~FftPlan() {
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    Complex* data() { return reinterpret_cast<Complex*>(buf_); }
    void execute() { fftw_execute(plan_); }
    int size() const { return n_; }

   private:
    int n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

double alternating(std::size_t k) { return (k & 1U) ? -1.0 : 1.0; }

}  // namespace

PointerGrid::PointerGrid(double extent, int points) : extent_(extent), points_(points) {
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw InvalidArgument("pointer grid extent must be positive");
    }
    if (points < 64 || !is_power_of_two(points)) {
        throw InvalidArgument("pointer grid needs a power-of-two point count >= 64");
    }
}

double PointerGrid::conjugate_spacing() const { return kPi / extent_; }

double PointerGrid::momentum(std::size_t m) const {
    return (static_cast<double>(m) - points_ / 2) * conjugate_spacing();
}

PointerWavefunction::PointerWavefunction(PointerGrid grid, Representation rep, std::vector<Complex> amplitudes)
    : grid_(grid), rep_(rep), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != static_cast<std::size_t>(grid_.points())) {
        throw DimensionMismatch("pointer amplitudes do not match the grid size");
    }
    const double n2 = norm_squared();
    if (!(std::abs(n2 - 1.0) <= kPointerNormTolerance)) {
        throw InvariantViolation("pointer wavefunction not normalized: " + format_double(n2));
    }
    const double edge = std::max(std::abs(amplitudes_.front()), std::abs(amplitudes_.back()));
    if (!(edge < kBoundaryTolerance)) {
        throw GridOverflow("pointer wavefunction does not fit its grid (edge amplitude " + format_double(edge) +
                           ")");
    }
}

double PointerWavefunction::spacing() const {
    return rep_ == Representation::position ? grid_.spacing() : grid_.conjugate_spacing();
}

double PointerWavefunction::coordinate(std::size_t k) const {
    return rep_ == Representation::position ? grid_.position(k) : grid_.momentum(k);
}

double PointerWavefunction::norm_squared() const {
    double acc = 0.0;
    for (const auto& z : amplitudes_) {
        acc += std::norm(z);
    }
    return acc * spacing();
}

double DensityTable::total_mass() const {
    double acc = 0.0;
    for (double x : density) {
        acc += x;
    }
    return acc * spacing;
}

PointerWavefunction gaussian_init(const PointerGrid& grid, double center, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(center)) {
        throw InvalidArgument("gaussian_init: sigma must be positive and center finite");
    }
    if (center - 4.0 * sigma < -grid.extent() || center + 4.0 * sigma > grid.extent()) {
        throw GridOverflow("gaussian_init: center +- 4 sigma leaves the grid");
    }
    const auto m = static_cast<std::size_t>(grid.points());
    std::vector<Complex> amps(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = grid.position(k) - center;
        const double a = std::exp(-x * x / (4.0 * sigma * sigma));
        amps[k] = a;
        acc += a * a;
    }
    const double scale = 1.0 / std::sqrt(acc * grid.spacing());
    for (auto& z : amps) {
        z *= scale;
    }
    return PointerWavefunction(grid, Representation::position, std::move(amps));
}

std::vector<Complex> position_to_momentum(const PointerGrid& grid, std::span<const Complex> position_amps) {
    const auto m = static_cast<std::size_t>(grid.points());
    if (position_amps.size() != m) {
        throw DimensionMismatch("position_to_momentum: size mismatch");
    }
    FftPlan fft(grid.points(), FFTW_FORWARD);
    Complex* buf = fft.data();
    for (std::size_t k = 0; k < m; ++k) {
        buf[k] = alternating(k) * position_amps[k];
    }
    fft.execute();
    const double scale = grid.spacing() / std::sqrt(2.0 * kPi);
    std::vector<Complex> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        out[k] = scale * alternating(k) * buf[k];
    }
    return out;
}

std::vector<Complex> momentum_to_position(const PointerGrid& grid, std::span<const Complex> momentum_amps) {
    const auto m = static_cast<std::size_t>(grid.points());
    if (momentum_amps.size() != m) {
        throw DimensionMismatch("momentum_to_position: size mismatch");
    }
    FftPlan fft(grid.points(), FFTW_BACKWARD);
    Complex* buf = fft.data();
    for (std::size_t k = 0; k < m; ++k) {
        buf[k] = alternating(k) * momentum_amps[k];
    }
    fft.execute();
    const double scale = grid.conjugate_spacing() / std::sqrt(2.0 * kPi);
    std::vector<Complex> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        out[k] = scale * alternating(k) * buf[k];
    }
    return out;
}

PointerWavefunction to_conjugate(const PointerWavefunction& w) {
    if (w.rep() == Representation::position) {
        return PointerWavefunction(w.grid(), Representation::momentum, position_to_momentum(w.grid(), w.amplitudes()));
    }
    return PointerWavefunction(w.grid(), Representation::position, momentum_to_position(w.grid(), w.amplitudes()));
}

PointerWavefunction to_position(const PointerWavefunction& w) {
    return w.rep() == Representation::position ? w : to_conjugate(w);
}

PointerWavefunction to_momentum(const PointerWavefunction& w) {
    return w.rep() == Representation::momentum ? w : to_conjugate(w);
}

DensityTable density(const PointerWavefunction& w) {
    DensityTable t;
    t.rep = w.rep();
    t.spacing = w.spacing();
    const auto amps = w.amplitudes();
    t.coordinate.resize(amps.size());
    t.density.resize(amps.size());
    for (std::size_t k = 0; k < amps.size(); ++k) {
        t.coordinate[k] = w.coordinate(k);
        t.density[k] = std::norm(amps[k]);
    }
    return t;
}

Moments moments(const DensityTable& table) {
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t k = 0; k < table.density.size(); ++k) {
        mass += table.density[k];
        first += table.density[k] * table.coordinate[k];
    }
    Moments out;
    if (!(mass > 0.0)) {
        return out;
    }
    out.mean = first / mass;
    double second = 0.0;
    for (std::size_t k = 0; k < table.density.size(); ++k) {
        const double dx = table.coordinate[k] - out.mean;
        second += table.density[k] * dx * dx;
    }
    out.variance = second / mass;
    return out;
}

Moments moments(const PointerWavefunction& w) { return moments(density(w)); }

Support position_support(const PointerWavefunction& w) {
    const auto pos = to_position(w);
    const auto amps = pos.amplitudes();
    Support s{pos.coordinate(0), pos.coordinate(0)};
    bool found = false;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if (std::abs(amps[k]) >= kBoundaryTolerance) {
            if (!found) {
                s.lo = pos.coordinate(k);
                found = true;
            }
            s.hi = pos.coordinate(k);
        }
    }
    return s;
}

bool shifts_fit(const PointerWavefunction& w, double min_shift, double max_shift) {
    const auto s = position_support(w);
    const double lo_edge = -w.grid().extent();
    const double hi_edge = w.grid().extent() - w.grid().spacing();
    return s.lo + min_shift > lo_edge && s.hi + max_shift < hi_edge;
}

PointerWavefunction shift(const PointerWavefunction& w, double s) {
    if (!std::isfinite(s)) {
        throw InvalidArgument("shift: non-finite displacement");
    }
    if (!shifts_fit(w, s, s)) {
        throw GridOverflow("shift by " + format_double(s) + " moves the profile off the grid");
    }
    const auto& grid = w.grid();
    auto q_amps = w.rep() == Representation::momentum ? std::vector<Complex>(w.amplitudes().begin(), w.amplitudes().end())
                                                      : position_to_momentum(grid, w.amplitudes());
    for (std::size_t m = 0; m < q_amps.size(); ++m) {
        q_amps[m] *= std::polar(1.0, -grid.momentum(m) * s);
    }
    if (w.rep() == Representation::momentum) {
        return PointerWavefunction(grid, Representation::momentum, std::move(q_amps));
    }
    return PointerWavefunction(grid, Representation::position, momentum_to_position(grid, q_amps));
}

std::string to_csv(const PointerWavefunction& w) {
    std::string out = w.rep() == Representation::position ? "position,re,im\n" : "momentum,re,im\n";
    const auto amps = w.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        out += format_double(w.coordinate(k));
        out += ',';
        out += format_double(amps[k].real());
        out += ',';
        out += format_double(amps[k].imag());
        out += '\n';
    }
    return out;
}

std::string to_csv(const DensityTable& table) {
    std::string out = table.rep == Representation::position ? "position,density\n" : "momentum,density\n";
    for (std::size_t k = 0; k < table.density.size(); ++k) {
        out += format_double(table.coordinate[k]);
        out += ',';
        out += format_double(table.density[k]);
        out += '\n';
    }
    return out;
}

}  // namespace bornlab
