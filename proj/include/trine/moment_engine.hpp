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
 * Scalar moments M_beta(n) for any beta >= 0.
 *
 * Integer beta uses M_beta(n) = M_1(n + beta - 1) from the exact recurrence.
 * beta = 0 uses M_0(n) = M_1(n - 1) when every n_k >= 1 and quadrature
 * otherwise. Fractional beta interpolates ln M linearly between the two
 * neighbouring integers.
 */

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trine/moment_table.hpp"
#include "trine/quadrature.hpp"
#include "trine/trine_core.hpp"

namespace trine {

/// Thread-safe source of ln M values. The exact recurrence runs forward on
/// demand and keeps only its two most recent levels in exact form; older
/// levels survive as doubles. Quadrature results are cached per
/// permutation class.
class MomentEngine {
  public:
    /// Highest total the engine will extend to.
    static constexpr int kMaxLevel = 4000;

    explicit MomentEngine(QuadratureSpec quad = {});
    MomentEngine(const MomentEngine &) = delete;
    MomentEngine &operator=(const MomentEngine &) = delete;

    const QuadratureSpec &quadrature() const { return quad_; }

    /// Makes every ln M_1 with total <= n_max available. Throws Capacity past
    /// kMaxLevel.
    void reserve(int n_max);
    int level_cap() const;

    double log_m1(const CountVector &counts);
    double log_moment_beta0(const CountVector &counts);
    double log_moment(double beta, const CountVector &counts);
    double log_det_moment(double beta, const CountVector &counts);

    /// Number of quadratures run so far (cache misses).
    std::size_t quadrature_count() const;

  private:
    void extend_to(int n_max);

    QuadratureSpec quad_;

    mutable std::shared_mutex levels_mutex_;
    std::vector<CanonicalIndex> index_;
    std::vector<std::vector<double>> log_m_;
    std::unique_ptr<MomentLevel> current_;
    std::unique_ptr<MomentLevel> older_;

    mutable std::mutex cache_mutex_;
    std::unordered_map<std::uint64_t, double> beta0_cache_;
    std::map<std::pair<std::int64_t, std::uint64_t>, double> det_cache_;
    std::size_t quadratures_ = 0;
};

/// Exact M_beta(n) = M_1(n + beta - 1). Throws Range outside the table.
mpq_class moment_integer_beta(const MomentTable &table, int beta, const CountVector &counts);

/// M_0(n): exact shift when min n_k >= 1, quadrature otherwise.
double moment_beta0(MomentEngine &engine, const CountVector &counts);

/// M_beta(n) for beta >= 0.
double moment(MomentEngine &engine, double beta, const CountVector &counts);

/// Die moments 2 prod_k Gamma(n_k + beta) / Gamma(N + K beta), K = counts.size().
double log_classical_moment(double beta, std::span<const int> counts);
double classical_moment(double beta, std::span<const int> counts);

} // namespace trine
