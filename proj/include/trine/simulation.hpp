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
 * Monte-Carlo replay of tomography runs on a fixed state.
 *
 * Trials are grouped in blocks of kTrialBlock. Block b draws from its own
 * std::mt19937_64 seeded by std::seed_seq{seed_lo, seed_hi, b}, so the
 * stream of any trial is fixed by (seed, trial index) alone and results do
 * not depend on how blocks are spread over workers.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "trine/estimators.hpp"
#include "trine/trine_core.hpp"

namespace trine {

inline constexpr std::int64_t kTrialBlock = 1024;

/// Multinomial draw by sequential conditional binomials.
CountVector sample_counts(const ProbTriple &probs, int N, std::mt19937_64 &rng);

struct SimConfig {
    BlochState state;
    int N = 1;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    int workers = 0;
    /// Keep every trial for export.
    bool keep_trials = false;
};

void validate(const SimConfig &config);

struct TrialRecord {
    CountVector counts;
    double loss = 0.0;
};

struct SimResult {
    double mean = 0.0;
    /// NaN for a single trial.
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::vector<TrialRecord> records;
};

/// Mean of sum_k (p_k - phat_k)^2 over the trials, with its standard error.
SimResult empirical_mse(const SimConfig &config, const EstimateTable &table);

/// Versioned per-trial CSV.
void write_trials_csv(std::ostream &out, const SimResult &result, int precision = 9);

} // namespace trine
