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
#include <span>
#include <string>
#include <vector>

#include "bornlab/hilbert.hpp"
#include "bornlab/probability_rule.hpp"

namespace bornlab {

/// Upper bound on the number of occupation vectors sum_distribution will enumerate.
inline constexpr double kEnumerationBudget = 1e7;
/// Sums closer than this fraction of max|alpha| are merged into one entry.
inline constexpr double kMergeRelativeTolerance = 1e-9;

/// N identical, unentangled copies of one state. Only (psi, N) is stored.
class ProductEnsemble {
   public:
    ProductEnsemble(StateVector single, int count);

    const StateVector& single() const { return single_; }
    int count() const { return count_; }

   private:
    StateVector single_;
    int count_;
};

/// A_tot = sum_i A_i over N particles.
class CollectiveObservable {
   public:
    CollectiveObservable(Observable single, int count);

    const Observable& single() const { return single_; }
    int count() const { return count_; }

   private:
    Observable single_;
    int count_;
};

/// sum_r (prod_{i != r} |psi>_i) |perp>_r, scaled by normalization().
///
/// The raw sum has norm sqrt(N); the default normalization 1/sqrt(N) makes it a unit vector.
/// Overlaps are evaluated from single-particle inner products, never from a d^N vector.
class PerpendicularEnsemble {
   public:
    PerpendicularEnsemble(StateVector single, StateVector perp, int count, bool unit_normalized = true);

    const StateVector& single() const { return single_; }
    const StateVector& perp() const { return perp_; }
    int count() const { return count_; }
    double normalization() const { return normalization_; }

    /// <Psi_total | Psi_perp_total>.
    Complex overlap_with_product() const;
    /// <Psi_perp_total | Psi_perp_total>.
    double self_overlap() const;

   private:
    StateVector single_;
    StateVector perp_;
    int count_;
    double normalization_;
};

/// Builds the perpendicular ensemble from the decomposition of A on psi.
/// Throws InvariantViolation for eigenstates, where no perpendicular component exists.
PerpendicularEnsemble ensemble_decompose(const ProductEnsemble& ens, const Observable& a,
                                         bool unit_normalized = true);

struct SumEntry {
    double value = 0.0;
    double prob = 0.0;
};

struct SumDistributionOptions {
    bool keep_occupations = true;
    double budget = kEnumerationBudget;
};

/// Exact law of S = sum_i alpha_{j_i} over N particles, one entry per distinct sum.
class SumDistribution {
   public:
    SumDistribution(std::vector<SumEntry> entries, std::size_t dim, std::vector<std::uint32_t> occupations,
                    std::vector<std::size_t> offsets);

    std::span<const SumEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t dim() const { return dim_; }
    bool has_occupations() const { return !offsets_.empty(); }

    /// Occupation vectors (N_1..N_d) merged into entry k.
    std::vector<std::vector<std::uint32_t>> occupations(std::size_t k) const;

    double total_probability() const;
    double mean() const;
    double variance() const;
    double max_abs_value() const;

   private:
    std::vector<SumEntry> entries_;
    std::size_t dim_;
    std::vector<std::uint32_t> occupations_;
    std::vector<std::size_t> offsets_;
};

/// C(N + d - 1, d - 1) as a double (saturates to +inf instead of overflowing).
double occupation_vector_count(int count, std::size_t dim);

double collective_mean(const ProductEnsemble& ens, const CollectiveObservable& a);
double collective_uncertainty(const ProductEnsemble& ens, const CollectiveObservable& a);

/// Enumerates occupation vectors, weighting each by multinomial(N; N_j) * prod p_j^{N_j}.
/// Throws BudgetExceeded when the enumeration would exceed options.budget.
SumDistribution sum_distribution(int count, std::span<const double> probabilities,
                                 std::span<const double> eigenvalues, const SumDistributionOptions& options = {});
SumDistribution sum_distribution(const ProductEnsemble& ens, const Observable& a, const ProbabilityRule& rule,
                                 const SumDistributionOptions& options = {});

/// CSV with header "value,prob".
std::string to_csv(const SumDistribution& dist);

}  // namespace bornlab
