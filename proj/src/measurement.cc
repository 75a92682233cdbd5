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

#include "bornlab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bornlab/errors.hpp"
#include "bornlab/format.hpp"

namespace bornlab {

namespace {

// 1 - |sum_j w_j exp(-i theta a_j)|^2 = sum_{j,k} w_j w_k 2 sin^2(theta (a_j - a_k) / 2),
// exact when the weights sum to one.
double characteristic_defect(std::span<const double> w, std::span<const double> a, double theta) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        for (std::size_t k = j + 1; k < w.size(); ++k) {
            const double s = std::sin(0.5 * theta * (a[j] - a[k]));
            acc += 4.0 * w[j] * w[k] * s * s;
        }
    }
    return acc;
}

// -expm1(z) for complex z.
Complex neg_expm1(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    const double half_sin = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
    const double im = std::exp(x) * std::sin(y);
    return -Complex{re, im};
}

}  // namespace

MeasurementConfig::MeasurementConfig(double coupling, double tau, int count)
    : coupling_(coupling), tau_(tau), count_(count) {
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
        throw InvalidArgument("coupling must be finite and >= 0");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("tau must be finite and > 0");
    }
    if (count < 1) {
        throw InvalidArgument("particle count must be >= 1");
    }
}

JointEvolution::JointEvolution(MeasurementConfig config, Observable observable, std::vector<Complex> eigen_amplitudes,
                               PointerWavefunction pointer, SumDistribution sumdist)
    : config_(config),
      observable_(std::move(observable)),
      amplitudes_(std::move(eigen_amplitudes)),
      pointer_(to_momentum(pointer)),
      sumdist_(std::move(sumdist)) {
    if (amplitudes_.size() != observable_.dim()) {
        throw DimensionMismatch("joint evolution: amplitudes do not match observable");
    }
    initial_mean_ = moments(to_position(pointer)).mean;
    double total = 0.0;
    weights_.resize(amplitudes_.size());
    for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
        weights_[j] = std::norm(amplitudes_[j]);
        total += weights_[j];
    }
    for (auto& w : weights_) {
        w /= total;
    }
    const auto alpha = observable_.eigenvalues();
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        mean_ += weights_[j] * alpha[j];
    }
    const auto& grid = pointer_.grid();
    chi_.resize(static_cast<std::size_t>(grid.points()));
    for (std::size_t m = 0; m < chi_.size(); ++m) {
        const double theta = config_.kick() * grid.momentum(m);
        Complex acc{};
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            acc += weights_[j] * std::polar(1.0, -theta * alpha[j]);
        }
        chi_[m] = acc;
    }
}

double JointEvolution::chi_defect(std::size_t m) const {
    const double theta = config_.kick() * pointer_.grid().momentum(m);
    return characteristic_defect(weights_, observable_.eigenvalues(), theta);
}

JointEvolution evolve_joint(const ProductEnsemble& ens, const Observable& a, const MeasurementConfig& cfg,
                            const PointerWavefunction& w) {
    if (ens.count() != cfg.count()) {
        throw DimensionMismatch("ensemble has " + std::to_string(ens.count()) + " particles, config expects " +
                                std::to_string(cfg.count()));
    }
    auto amps = eigen_amplitudes(ens.single(), a);
    std::vector<double> p(amps.size());
    double total = 0.0;
    for (std::size_t j = 0; j < amps.size(); ++j) {
        p[j] = std::norm(amps[j]);
        total += p[j];
    }
    for (auto& x : p) {
        x /= total;
    }
    SumDistributionOptions opts;
    opts.keep_occupations = false;
    auto dist = sum_distribution(ens.count(), p, a.eigenvalues(), opts);
    return JointEvolution(cfg, a, std::move(amps), w, std::move(dist));
}

DensityTable pointer_distribution_after(const JointEvolution& ev) {
    const auto entries = ev.sumdist().entries();
    const double kick = ev.config().kick();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& e : entries) {
        lo = std::min(lo, kick * e.value);
        hi = std::max(hi, kick * e.value);
    }
    if (!shifts_fit(ev.pointer(), lo, hi)) {
        throw GridOverflow("pointer shifts in [" + format_double(lo) + ", " + format_double(hi) +
                           "] leave the grid of extent " + format_double(ev.pointer().grid().extent()));
    }

    const auto& grid = ev.pointer().grid();
    const auto phi = ev.pointer().amplitudes();
    const auto m = static_cast<std::size_t>(grid.points());

    DensityTable out;
    out.rep = Representation::position;
    out.spacing = grid.spacing();
    out.coordinate.resize(m);
    out.density.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        out.coordinate[k] = grid.position(k);
    }

    // The marginal is |phi|^2 convolved with the law of lambda dt S, whose transform is chi^N.
    const auto pos0 = momentum_to_position(grid, phi);
    std::vector<Complex> rho(m);
    for (std::size_t k = 0; k < m; ++k) {
        rho[k] = std::norm(pos0[k]);
    }
    auto spectrum = position_to_momentum(grid, rho);
    const auto chi = ev.chi();
    const double n = ev.config().count();
    for (std::size_t i = 0; i < m; ++i) {
        spectrum[i] *= chi[i] == Complex{} ? Complex{} : std::exp(n * std::log(chi[i]));
    }
    const auto mixed = momentum_to_position(grid, spectrum);
    for (std::size_t k = 0; k < m; ++k) {
        out.density[k] = std::max(0.0, mixed[k].real());
    }
    return out;
}

double mean_shift(const JointEvolution& ev) {
    return moments(pointer_distribution_after(ev)).mean - ev.initial_position_mean();
}

double parallel_weight(const JointEvolution& ev) {
    const auto phi = ev.pointer().amplitudes();
    const double n = ev.config().count();
    double acc = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) {
        acc += std::norm(phi[m]) * std::exp(n * std::log1p(-ev.chi_defect(m)));
    }
    return acc * ev.pointer().spacing();
}

double orthogonal_weight(const JointEvolution& ev) {
    const auto phi = ev.pointer().amplitudes();
    const double n = ev.config().count();
    double acc = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) {
        acc += std::norm(phi[m]) * -std::expm1(n * std::log1p(-ev.chi_defect(m)));
    }
    return acc * ev.pointer().spacing();
}

double leading_order_weight(const ProductEnsemble& ens, const Observable& a, const MeasurementConfig& cfg,
                            double sigma_q2) {
    const double spread = uncertainty(ens.single(), a);
    const double n = ens.count();
    const double total_var = n * spread * spread;
    const double dt = cfg.tau() / n;
    return sigma_q2 * cfg.coupling() * cfg.coupling() * total_var * dt * dt;
}

double infidelity_to_shifted(const JointEvolution& ev) {
    const auto phi = ev.pointer().amplitudes();
    const auto& grid = ev.pointer().grid();
    const auto w = ev.weights();
    const auto alpha = ev.observable().eigenvalues();
    const double n = ev.config().count();
    const double kick = ev.config().kick();
    const double mean = ev.single_mean();

    // g(q) = chi(q) exp(i lambda q mean dt); the shifted reference removes the mean drift exactly.
    Complex eps{};
    double mass = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) {
        const double theta = kick * grid.momentum(m);
        double re_defect = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double arg = theta * (alpha[j] - mean);
            const double hs = std::sin(0.5 * arg);
            re_defect += w[j] * 2.0 * hs * hs;
            im -= w[j] * std::sin(arg);
        }
        const double defect = ev.chi_defect(m);
        const Complex log_g{0.5 * std::log1p(-defect), std::atan2(im, 1.0 - re_defect)};
        const double rho = std::norm(phi[m]);
        mass += rho;
        eps += rho * neg_expm1(n * log_g);
    }
    const double dq = grid.conjugate_spacing();
    mass *= dq;
    eps *= dq;
    // F = |mass - eps|^2.
    return (1.0 - mass * mass) + 2.0 * mass * eps.real() - std::norm(eps);
}

double fidelity_to_shifted(const JointEvolution& ev) {
    return std::clamp(1.0 - infidelity_to_shifted(ev), 0.0, 1.0);
}

namespace {

struct PostFactors {
    // conj(c_ij) * b_j for each post state i and outcome j
    std::vector<std::vector<Complex>> coeffs;
    std::vector<Complex> overlaps;
    double log_abs_overlap = 0.0;
};

PostFactors post_factors(const JointEvolution& ev, std::span<const StateVector> posts) {
    const int n = ev.config().count();
    if (posts.empty() || (posts.size() != 1 && posts.size() != static_cast<std::size_t>(n))) {
        throw InvalidArgument("post-selection needs one state, or one state per particle (" + std::to_string(n) + ")");
    }
    PostFactors f;
    const auto b = ev.eigen_amplitudes();
    for (const auto& post : posts) {
        const auto c = eigen_amplitudes(post, ev.observable());
        std::vector<Complex> coeff(c.size());
        Complex ov{};
        for (std::size_t j = 0; j < c.size(); ++j) {
            coeff[j] = std::conj(c[j]) * b[j];
            ov += coeff[j];
        }
        f.coeffs.push_back(std::move(coeff));
        f.overlaps.push_back(ov);
    }
    const double reps = posts.size() == 1 ? static_cast<double>(n) : 1.0;
    for (const auto& ov : f.overlaps) {
        f.log_abs_overlap += reps * std::log(std::abs(ov));
    }
    return f;
}

}  // namespace

double postselection_overlap(const JointEvolution& ev, std::span<const StateVector> posts) {
    return std::exp(post_factors(ev, posts).log_abs_overlap);
}

DensityTable postselect_pointer(const JointEvolution& ev, std::span<const StateVector> posts, double overlap_floor) {
    const auto f = post_factors(ev, posts);
    if (!(f.log_abs_overlap >= std::log(overlap_floor))) {
        throw OverlapBelowFloor("post-selection overlap " + format_double(std::exp(f.log_abs_overlap)) +
                                " is below the floor " + format_double(overlap_floor));
    }
    const auto& grid = ev.pointer().grid();
    const auto phi = ev.pointer().amplitudes();
    const auto alpha = ev.observable().eigenvalues();
    const int n = ev.config().count();
    const double kick = ev.config().kick();
    const bool shared = posts.size() == 1;

    std::vector<Complex> conditioned(phi.size());
    std::vector<Complex> phases(alpha.size());
    for (std::size_t m = 0; m < phi.size(); ++m) {
        const double theta = kick * grid.momentum(m);
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            phases[j] = std::polar(1.0, -theta * alpha[j]);
        }
        // Each factor is divided by its q = 0 value (the overlap), keeping the product O(1).
        Complex amp = phi[m];
        for (int i = 0; i < n; ++i) {
            const std::size_t idx = shared ? 0 : static_cast<std::size_t>(i);
            Complex factor{};
            const auto& coeff = f.coeffs[idx];
            for (std::size_t j = 0; j < coeff.size(); ++j) {
                factor += coeff[j] * phases[j];
            }
            amp *= factor / f.overlaps[idx];
        }
        conditioned[m] = amp;
    }
    const auto pos = momentum_to_position(grid, conditioned);

    DensityTable out;
    out.rep = Representation::position;
    out.spacing = grid.spacing();
    out.coordinate.resize(pos.size());
    out.density.resize(pos.size());
    double peak = 0.0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
        out.coordinate[k] = grid.position(k);
        out.density[k] = std::norm(pos[k]);
        peak = std::max(peak, out.density[k]);
    }
    const double edge = std::max(out.density.front(), out.density.back());
    if (!(edge <= kBoundaryTolerance * kBoundaryTolerance * std::max(peak, 1.0))) {
        throw GridOverflow("post-selected pointer profile reaches the grid edge");
    }
    const double mass = out.total_mass();
    for (auto& x : out.density) {
        x /= mass;
    }
    return out;
}

}  // namespace bornlab
