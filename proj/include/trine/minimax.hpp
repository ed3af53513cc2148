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
 * One-parameter minimax searches: minimise g(t) = max over states of the
 * MSE of the estimator with parameter t.
 *
 * A coarse scan locates every local minimum of g; each is polished by golden
 * section until g varies by less than `tol` (relative) across the bracket.
 */

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "trine/estimators.hpp"
#include "trine/moment_engine.hpp"
#include "trine/risk.hpp"

namespace trine {

struct MinimaxSample {
    double parameter = 0.0;
    double max_mse = 0.0;
    double min_mse = 0.0;
};

struct MinimaxResult {
    int N = 0;
    EstimatorKind kind = EstimatorKind::MeanTrine;
    double optimum = 0.0;
    /// g at the optimum, together with the profile extremes there.
    double value = 0.0;
    double min_mse = 0.0;
    BlochState argmax;
    BlochState argmin;
    /// Every evaluation, sorted by parameter.
    std::vector<MinimaxSample> samples;
    /// Parameter interval where g stays within 1% of the optimum (from the
    /// samples, linearly interpolated).
    double flat_low = 0.0;
    double flat_high = 0.0;
    int golden_iterations = 0;
    int local_minima = 0;
    bool converged = false;
    bool at_lower_edge = false;
};

struct SearchOptions {
    double lower = 0.0;
    double upper = 1.0;
    double scan_step = 0.25;
    /// Relative spread of g across the golden-section bracket at which to stop.
    double tol = 1e-4;
    int max_iterations = 60;
};

/// Scan plus golden section on a generic objective returning the profile at
/// parameter t. Throws Range when the best scan point is the upper edge.
MinimaxResult minimise_max_mse(const SearchOptions &options,
                               const std::function<RiskProfile(double)> &profile_at);

/// Default upper end of the beta search at total N: sqrt(N)/3 + 1.
double default_beta_upper(int N);

/// Minimax beta of the trine mean estimator over [beta_lo, beta_hi]
/// (beta_hi < 0 selects default_beta_upper).
MinimaxResult optimal_beta(int N, MomentEngine &engine, const GridSpec &grid, double tol = 1e-4,
                           double beta_lo = 0.0, double beta_hi = -1.0, int workers = 0);

/// Minimax admixture of the corrected estimator over [0, 1] (scan step 0.05).
MinimaxResult optimal_lambda(int N, const GridSpec &grid, double tol = 1e-4, int workers = 0);

struct SweepRecord {
    int N = 0;
    EstimatorKind kind = EstimatorKind::MeanTrine;
    /// Optimal beta or lambda; 0 for parameter-free kinds.
    double parameter = 0.0;
    double max_mse = 0.0;
    double min_mse = 0.0;
    BlochState argmax;
    BlochState argmin;
    /// Present for optimised kinds.
    MinimaxResult search;
};

/// For each N and kind: the optimal parameter where one applies
/// (mean-trine: beta, corrected-minimax: lambda) and the MSE extremes.
/// mean-det-weight uses the fixed beta of `det_beta`.
std::vector<SweepRecord> sweep(const std::vector<int> &N_list,
                               const std::vector<EstimatorKind> &kinds, MomentEngine &engine,
                               const GridSpec &grid, double tol = 1e-4, int workers = 0,
                               double det_beta = 1.0);

} // namespace trine
