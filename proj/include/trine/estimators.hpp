// Copyright 2026 The trine-estimators Authors
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

/**
 * @file
 * Point estimators CountVector -> ProbTriple.
 *
 * Every estimator returns the centre (1/3, 1/3, 1/3) for N = 0.
 */

#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "trine/moment_engine.hpp"
#include "trine/moment_table.hpp"
#include "trine/trine_core.hpp"

namespace trine {

enum class EstimatorKind { MeanTrine, ClassicalMinimax, CorrectedMinimax, MlTrine, MeanDetWeight };

/// Canonical names: mean-trine, classical-minimax, corrected-minimax, ml-trine,
/// mean-det-weight. parse also accepts mean, classical, corrected, ml, det.
const char *estimator_kind_name(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string &name);

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::MeanTrine;
    /// Weight exponent of the mean kinds.
    double beta = 1.0;
    /// Admixture of the corrected kind.
    double lambda = 0.0;
    /// Angular tolerance of the ML boundary search.
    double ml_tol = 1e-13;

    /// The parameter that distinguishes members of the family (beta, lambda
    /// or 0).
    double parameter() const;
};

/// Throws InvalidArgument when a field is outside its domain.
void validate(const EstimatorSpec &spec);

struct EstimateDiagnostics {
    /// |sum_k p_k - 1| before renormalisation (0 on exact paths).
    double sum_deviation = 0.0;
    /// Radius clamped back onto the disk.
    bool clamped = false;
};

/// p_k = M_beta(n + e_k) / M_beta(n). Fractional beta and beta = 0 are
/// renormalised; a deviation above 0.05 raises Consistency.
ProbTriple mean_estimate(const CountVector &counts, double beta, MomentEngine &engine,
                         EstimateDiagnostics *diag = nullptr);

/// Exact mean estimate for integer beta >= 1 from a rational table.
std::array<mpq_class, 3> mean_estimate_exact(const CountVector &counts, int beta,
                                             const MomentTable &table);

/// Die minimax estimator (1/K) a_N + (n_k/N) b_N for any number of outcomes.
std::vector<double> classical_minimax_estimate(const std::vector<int> &counts);
ProbTriple classical_minimax_estimate(const CountVector &counts);

/// Die mean estimator (n_k + beta) / (N + K beta).
std::vector<double> classical_mean_estimate(const std::vector<int> &counts, double beta);

/// Classical minimax estimate admixed with the centre by lambda, then pulled
/// radially onto the disk if it still lies outside.
ProbTriple corrected_minimax_estimate(const CountVector &counts, double lambda);

/// Smallest uniform admixture that makes every classical estimate at this N
/// physical: 1 - 1/r_max with r_max the Bloch radius at (N, 0, 0).
double lambda_min(int N);

/// Maximiser of sum_k n_k ln p_k over the disk.
ProbTriple ml_estimate(const CountVector &counts, const TrineConfig &config = {},
                       double tol = 1e-13);

/// Mean estimator for the det(rho)^(beta-1) weight, by quadrature.
ProbTriple det_weight_mean_estimate(const CountVector &counts, double beta, MomentEngine &engine,
                                    EstimateDiagnostics *diag = nullptr);

ProbTriple estimate(const EstimatorSpec &spec, const CountVector &counts, MomentEngine &engine,
                    EstimateDiagnostics *diag = nullptr);

/// Estimates for every count vector of total N, stored in enumerate_counts
/// order.
struct EstimateTable {
    int N = 0;
    EstimatorSpec spec;
    std::vector<ProbTriple> entries;
    std::size_t clamped = 0;
    double max_sum_deviation = 0.0;

    const ProbTriple &operator()(const CountVector &counts) const {
        return entries[count_index(counts)];
    }
};

/// Throws Consistency if a non-classical entry is unphysical.
EstimateTable build_estimate_table(int N, const EstimatorSpec &spec, MomentEngine &engine,
                                   int workers = 0);

/// Table whose entries are the given probabilities for every count vector;
/// the MSE against it is zero at exactly that state.
EstimateTable constant_estimate_table(int N, const ProbTriple &probs);

} // namespace trine
