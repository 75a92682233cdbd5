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
#include <vector>

#include "bornlab/ensemble.hpp"
#include "bornlab/hilbert.hpp"
#include "bornlab/pointer.hpp"

namespace bornlab {

inline constexpr double kDefaultOverlapFloor = 1e-3;

/// Coupling strength, total time budget and particle count. The step is always tau / N.
class MeasurementConfig {
   public:
    /// coupling >= 0 (zero means "no measurement"), tau > 0, count >= 1.
    MeasurementConfig(double coupling, double tau, int count);

    double coupling() const { return coupling_; }
    double tau() const { return tau_; }
    int count() const { return count_; }
    double dt() const { return tau_ / count_; }
    /// lambda * dt, the pointer displacement per unit of summed eigenvalue.
    double kick() const { return coupling_ * dt(); }

   private:
    double coupling_;
    double tau_;
    int count_;
};

/// Exact U = exp(-i lambda Q A_tot dt) applied to |psi>^N |pointer>.
///
/// For each conjugate sample q the evolution factorizes over particles, so the state is
/// held as the pointer amplitude phi(q), the single-particle characteristic function
/// chi(q) = sum_j w_j exp(-i lambda q alpha_j dt), and the Born-weighted law of the
/// summed eigenvalue. Nothing of size d^N is built.
class JointEvolution {
   public:
    JointEvolution(MeasurementConfig config, Observable observable, std::vector<Complex> eigen_amplitudes,
                   PointerWavefunction pointer, SumDistribution sumdist);

    const MeasurementConfig& config() const { return config_; }
    const Observable& observable() const { return observable_; }
    /// b_j of the prepared state in the eigenbasis.
    std::span<const Complex> eigen_amplitudes() const { return amplitudes_; }
    /// |b_j|^2 rescaled to sum to exactly 1.
    std::span<const double> weights() const { return weights_; }
    double single_mean() const { return mean_; }
    /// Initial pointer, momentum representation.
    const PointerWavefunction& pointer() const { return pointer_; }
    /// Mean pointer position before the interaction.
    double initial_position_mean() const { return initial_mean_; }
    const SumDistribution& sumdist() const { return sumdist_; }
    /// chi(q) at every momentum grid point.
    std::span<const Complex> chi() const { return chi_; }

    /// 1 - |chi(q)|^2 at grid point m, evaluated without cancellation.
    double chi_defect(std::size_t m) const;

   private:
    MeasurementConfig config_;
    Observable observable_;
    std::vector<Complex> amplitudes_;
    std::vector<double> weights_;
    double mean_ = 0.0;
    PointerWavefunction pointer_;
    double initial_mean_ = 0.0;
    SumDistribution sumdist_;
    std::vector<Complex> chi_;
};

JointEvolution evolve_joint(const ProductEnsemble& ens, const Observable& a, const MeasurementConfig& cfg,
                            const PointerWavefunction& w);

/// Final pointer marginal over position: sum_S P(S) |phi(pi - lambda dt S)|^2.
/// Throws GridOverflow if any shifted copy leaves the grid.
DensityTable pointer_distribution_after(const JointEvolution& ev);

/// Mean of pointer_distribution_after minus the initial pointer mean.
double mean_shift(const JointEvolution& ev);

/// Squared norm of the evolved component along |psi>^N: integral |phi|^2 |chi|^{2N}.
double parallel_weight(const JointEvolution& ev);

/// Squared norm of the evolved component orthogonal to |psi>^N: integral |phi|^2 (1 - |chi|^{2N}).
double orthogonal_weight(const JointEvolution& ev);

/// <Q^2> lambda^2 Delta A_tot^2 (tau / N)^2, the leading-order prediction for orthogonal_weight.
double leading_order_weight(const ProductEnsemble& ens, const Observable& a, const MeasurementConfig& cfg,
                            double sigma_q2);

/// |<exact evolved state | rigidly shifted state>|^2.
double fidelity_to_shifted(const JointEvolution& ev);
/// 1 - fidelity_to_shifted, evaluated directly so that values near 1e-6 keep full precision.
double infidelity_to_shifted(const JointEvolution& ev);

/// Pointer position density conditioned on a product post-selection.
///
/// posts holds one single-particle state per particle, or one state applied to every particle.
/// Throws OverlapBelowFloor when |<post|psi^N>| < overlap_floor.
DensityTable postselect_pointer(const JointEvolution& ev, std::span<const StateVector> posts,
                                double overlap_floor = kDefaultOverlapFloor);

/// |<post|psi^N>| for the same post-selection convention as postselect_pointer.
double postselection_overlap(const JointEvolution& ev, std::span<const StateVector> posts);

}  // namespace bornlab
