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

#include "trine/moment_engine.hpp"

#include <cmath>
#include <sstream>

#include "trine/errors.hpp"

namespace trine {

namespace {

// Permutation class representative. Quadratures always run on it, so a cached
// value does not depend on which permutation was requested first.
CountVector representative(const CountVector &counts) {
    const auto s = canonical_counts(counts);
    return CountVector{{s[0], s[1], s[2]}};
}

std::uint64_t class_key(const CountVector &counts) {
    const auto s = canonical_counts(counts);
    return (static_cast<std::uint64_t>(s[0]) << 42) | (static_cast<std::uint64_t>(s[1]) << 21) |
           static_cast<std::uint64_t>(s[2]);
}

CountVector add_all(const CountVector &counts, int shift) {
    return CountVector{{counts[0] + shift, counts[1] + shift, counts[2] + shift}};
}

void check_beta(double beta) {
    require(std::isfinite(beta) && beta >= 0.0, ErrorCode::InvalidArgument,
            "beta must be a finite value >= 0");
}

} // namespace

MomentEngine::MomentEngine(QuadratureSpec quad) : quad_(std::move(quad)) {
    validate(quad_);
    current_ = std::make_unique<MomentLevel>(first_moment_level());
    index_.push_back(current_->index);
    log_m_.push_back({0.0});
}

int MomentEngine::level_cap() const {
    std::shared_lock lock(levels_mutex_);
    return static_cast<int>(log_m_.size()) - 1;
}

void MomentEngine::reserve(int n_max) {
    if (n_max > kMaxLevel) {
        std::ostringstream msg;
        msg << "moments with total " << n_max << " exceed the engine limit of " << kMaxLevel;
        fail(ErrorCode::Capacity, msg.str());
    }
    {
        std::shared_lock lock(levels_mutex_);
        if (static_cast<int>(log_m_.size()) > n_max) {
            return;
        }
    }
    extend_to(n_max);
}

void MomentEngine::extend_to(int n_max) {
    std::unique_lock lock(levels_mutex_);
    while (static_cast<int>(log_m_.size()) <= n_max) {
        auto next = std::make_unique<MomentLevel>(next_moment_level(*current_, older_.get()));
        std::vector<double> logs(next->index.size());
        for (std::size_t i = 0; i < logs.size(); ++i) {
            logs[i] = log_ratio(next->m_num[i], next->m_den);
        }
        index_.push_back(next->index);
        log_m_.push_back(std::move(logs));
        older_ = std::move(current_);
        current_ = std::move(next);
    }
}

double MomentEngine::log_m1(const CountVector &counts) {
    check_counts(counts);
    const int N = counts.total();
    reserve(N);
    std::shared_lock lock(levels_mutex_);
    const auto n = static_cast<std::size_t>(N);
    return log_m_[n][index_[n].index(counts)];
}

double MomentEngine::log_moment_beta0(const CountVector &counts) {
    check_counts(counts);
    if (counts.min() >= 1) {
        return log_m1(add_all(counts, -1));
    }
    const std::uint64_t key = class_key(counts);
    {
        std::lock_guard lock(cache_mutex_);
        auto it = beta0_cache_.find(key);
        if (it != beta0_cache_.end()) {
            return it->second;
        }
    }
    const double value = log_moment_quadrature(0.0, representative(counts), MomentWeight::PProduct, quad_);
    std::lock_guard lock(cache_mutex_);
    ++quadratures_;
    beta0_cache_.emplace(key, value);
    return value;
}

double MomentEngine::log_moment(double beta, const CountVector &counts) {
    check_beta(beta);
    const double floor_beta = std::floor(beta);
    const double frac = beta - floor_beta;
    const int b = static_cast<int>(floor_beta);
    if (frac == 0.0) {
        return b == 0 ? log_moment_beta0(counts) : log_m1(add_all(counts, b - 1));
    }
    const double lo = b == 0 ? log_moment_beta0(counts) : log_m1(add_all(counts, b - 1));
    const double hi = log_m1(add_all(counts, b));
    return (1.0 - frac) * lo + frac * hi;
}

double MomentEngine::log_det_moment(double beta, const CountVector &counts) {
    check_counts(counts);
    require(std::isfinite(beta) && beta > 0.0, ErrorCode::InvalidArgument,
            "det-weight beta must be a finite value > 0");
    // Quantised so that repeated requests share one cache entry.
    const auto q = static_cast<std::int64_t>(std::llround(beta * 1e6));
    require(q > 0, ErrorCode::InvalidArgument, "det-weight beta is below the 1e-6 resolution");
    const auto key = std::make_pair(q, class_key(counts));
    {
        std::lock_guard lock(cache_mutex_);
        auto it = det_cache_.find(key);
        if (it != det_cache_.end()) {
            return it->second;
        }
    }
    const double value =
        log_moment_quadrature(static_cast<double>(q) * 1e-6, representative(counts),
                              MomentWeight::DetRho, quad_);
    std::lock_guard lock(cache_mutex_);
    ++quadratures_;
    det_cache_.emplace(key, value);
    return value;
}

std::size_t MomentEngine::quadrature_count() const {
    std::lock_guard lock(cache_mutex_);
    return quadratures_;
}

mpq_class moment_integer_beta(const MomentTable &table, int beta, const CountVector &counts) {
    check_counts(counts);
    require(beta >= 1, ErrorCode::InvalidArgument, "exact moments need an integer beta >= 1");
    const CountVector shifted = add_all(counts, beta - 1);
    if (shifted.total() > table.n_max()) {
        std::ostringstream msg;
        msg << "M_" << beta << " at total " << counts.total() << " needs table level "
            << shifted.total() << " but n_max=" << table.n_max();
        fail(ErrorCode::Range, msg.str());
    }
    return table.M(shifted);
}

double moment_beta0(MomentEngine &engine, const CountVector &counts) {
    return std::exp(engine.log_moment_beta0(counts));
}

double moment(MomentEngine &engine, double beta, const CountVector &counts) {
    return std::exp(engine.log_moment(beta, counts));
}

double log_classical_moment(double beta, std::span<const int> counts) {
    require(std::isfinite(beta) && beta > 0.0, ErrorCode::InvalidArgument,
            "die moments need a finite beta > 0");
    require(!counts.empty(), ErrorCode::InvalidArgument, "die moments need at least one outcome");
    double total = 0.0;
    double out = std::log(2.0);
    for (int n : counts) {
        require(n >= 0, ErrorCode::InvalidArgument, "count vector entries must be non-negative");
        out += std::lgamma(n + beta);
        total += n;
    }
    return out - std::lgamma(total + static_cast<double>(counts.size()) * beta);
}

double classical_moment(double beta, std::span<const int> counts) {
    return std::exp(log_classical_moment(beta, counts));
}

} // namespace trine
