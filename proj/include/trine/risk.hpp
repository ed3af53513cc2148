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
 * Exact mean squared error of an estimate table,
 *
 *   MSE(p) = sum_n  N!/(n1! n2! n3!) p1^n1 p2^n2 p3^n3  sum_k (p_k - phat_k(n))^2,
 *
 * by enumeration of the count vectors, and MSE profiles over the state space.
 *
 * Trine covariance makes the profile over the wedge phi in [0, pi/3]
 * determine the whole disk, so disk profiles sample only that wedge.
 */

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "trine/estimators.hpp"
#include "trine/trine_core.hpp"

namespace trine {

enum class Loss { SquaredEuclidean, HilbertSchmidt };

/// Exact expected loss at `probs` (any point of the simplex). Multinomial
/// terms below e^-46 of the largest one are skipped; `weight_sum`, if given,
/// receives the total weight that was summed.
double mse_at_probs(const ProbTriple &probs, const EstimateTable &table,
                    Loss loss = Loss::SquaredEuclidean, double *weight_sum = nullptr);

double mse_at_state(const BlochState &state, const EstimateTable &table);

/// Die-model MSE with weight beta over K outcomes:
/// [(beta^2 K^2 - N) p^2 + (N - beta^2 K)] / (N + K beta)^2.
double classical_mse_closed_form(double beta, double p_sq, int N, int K);

struct GridSpec {
    /// Radial nodes, uniform on [0, 1] including both ends.
    int radial = 64;
    /// Angular nodes, uniform on [0, pi/3] including both ends.
    int angular = 96;
    /// Refinement passes around the provisional max and min.
    int refine_levels = 2;
    /// Spacing shrink per pass.
    int refine_factor = 10;
    /// Each pass evaluates (2 h + 1)^2 nodes around the current extreme.
    int refine_half_width = 10;
    /// Evaluate over the whole probability simplex instead of the disk.
    bool die_mode = false;
    /// Die-mode lattice p = (i, j, D - i - j) / D.
    int die_divisions = 48;
};

void validate(const GridSpec &grid);

struct RiskNode {
    ProbTriple probs;
    BlochState state;
    double mse = 0.0;
};

struct RiskProfile {
    int N = 0;
    /// Estimator label (kind name or "oracle") and its parameter.
    std::string estimator;
    double parameter = 0.0;
    GridSpec grid;
    /// Coarse grid in evaluation order (radial-major; r = 0 appears once).
    std::vector<RiskNode> nodes;
    double coarse_max = 0.0;
    double coarse_min = 0.0;
    /// Extremes over coarse and refined nodes.
    RiskNode max;
    RiskNode min;
    std::size_t evaluations = 0;
};

/// Profile of a fixed estimate table.
RiskProfile mse_profile(const GridSpec &grid, const EstimateTable &table, int workers = 0);

/// Builds the table for `spec` at total N and profiles it.
RiskProfile mse_profile(const GridSpec &grid, int N, const EstimatorSpec &spec,
                        MomentEngine &engine, int workers = 0);

/// Profile of the estimator that always reports the true state (MSE 0).
RiskProfile oracle_profile(const GridSpec &grid, int N, int workers = 0);

/// The profile evaluator behind the overloads above: `mse` maps a state to
/// its risk.
RiskProfile profile_with(const GridSpec &grid, int N, const std::string &label,
                         double parameter, const std::function<double(const ProbTriple &)> &mse,
                         int workers);

/// Versioned CSV of the coarse nodes.
void write_profile_csv(std::ostream &out, const RiskProfile &profile, int precision = 9);

/// printf("%.*g") formatting shared by every text output.
std::string format_number(double value, int precision = 9);

} // namespace trine
