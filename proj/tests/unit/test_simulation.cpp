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

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "trine/errors.hpp"
#include "trine/parallel.hpp"
#include "trine/risk.hpp"
#include "trine/simulation.hpp"

using namespace trine;

TEST_CASE("multinomial draws") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const CountVector c = sample_counts({{1.0, 0.0, 0.0}}, 17, rng);
        CHECK(c == CountVector{{17, 0, 0}});
        const CountVector d = sample_counts({{0.0, 0.0, 1.0}}, 9, rng);
        CHECK(d == CountVector{{0, 0, 9}});
    }
    const int N = 300000;
    const CountVector c = sample_counts(center_probs(), N, rng);
    CHECK(c.total() == N);
    const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / N);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(static_cast<double>(c[k]) / N - 1.0 / 3) < 5 * sigma);
    }
    std::mt19937_64 a(42);
    std::mt19937_64 b(42);
    const ProbTriple p = probs_from_state({0.6, 1.0});
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_counts(p, 50, a) == sample_counts(p, 50, b));
    }
}

TEST_CASE("centre state at one click has zero-variance loss") {
    MomentEngine e;
    EstimatorSpec s;
    const EstimateTable t = build_estimate_table(1, s, e, 1);
    SimConfig c;
    c.N = 1;
    c.trials = 1000000;
    c.seed = 12345;
    c.workers = 2;
    const SimResult r = empirical_mse(c, t);
    CHECK(r.trials == 1000000);
    CHECK(std::abs(r.mean - 1.0 / 96) < 1e-12);
    CHECK(r.std_error < 1e-12);
}

TEST_CASE("oracle estimator has zero loss") {
    SimConfig c;
    c.state = {0.5, 0.2};
    c.N = 20;
    c.trials = 5000;
    c.seed = 3;
    const EstimateTable t = constant_estimate_table(20, probs_from_state(c.state));
    const SimResult r = empirical_mse(c, t);
    CHECK(r.mean == 0.0);
    CHECK(r.std_error == 0.0);
}

TEST_CASE("empirical MSE tracks the exact value") {
    MomentEngine e;
    EstimatorSpec s;
    s.beta = 0.5;
    const EstimateTable t = build_estimate_table(15, s, e, 1);
    SimConfig c;
    c.state = {0.7, 0.4};
    c.N = 15;
    c.trials = 200000;
    c.seed = 99;
    const SimResult r = empirical_mse(c, t);
    const double exact = mse_at_state(c.state, t);
    CHECK(std::abs(r.mean - exact) < 3 * r.std_error);
    CHECK(r.std_error > 0.0);
}

TEST_CASE("determinism across worker counts and repeated runs") {
    MomentEngine e;
    EstimatorSpec s;
    s.kind = EstimatorKind::MlTrine;
    const EstimateTable t = build_estimate_table(30, s, e, 1);
    SimConfig c;
    c.state = {1.0, 0.0};
    c.N = 30;
    c.trials = 10000;
    c.seed = 2024;
    c.keep_trials = true;
    c.workers = 1;
    const SimResult a = empirical_mse(c, t);
    c.workers = 5;
    const SimResult b = empirical_mse(c, t);
    const SimResult again = empirical_mse(c, t);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(b.mean == again.mean);
    REQUIRE(a.records.size() == 10000);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].counts == b.records[i].counts);
    }
    c.seed = 2025;
    CHECK(empirical_mse(c, t).mean != a.mean);
}

TEST_CASE("single trial and CSV layout") {
    MomentEngine e;
    EstimatorSpec s;
    const EstimateTable t = build_estimate_table(4, s, e, 1);
    SimConfig c;
    c.N = 4;
    c.trials = 1;
    c.keep_trials = true;
    const SimResult r = empirical_mse(c, t);
    CHECK(std::isnan(r.std_error));
    CHECK(r.mean == r.records[0].loss);
    std::ostringstream os;
    write_trials_csv(os, r, 9);
    CHECK(os.str().rfind("# trine-simulation-trials v1\ntrial,n1,n2,n3,squared_error\n0,", 0) == 0);
}

TEST_CASE("config validation") {
    MomentEngine e;
    EstimatorSpec s;
    const EstimateTable t = build_estimate_table(4, s, e, 1);
    SimConfig c;
    c.N = 4;
    c.trials = 0;
    CHECK_THROWS_AS(empirical_mse(c, t), Error);
    c.trials = 10;
    c.state.r = 1.2;
    CHECK_THROWS_AS(empirical_mse(c, t), Error);
    c.state.r = 0.0;
    c.N = 5;
    CHECK_THROWS_AS(empirical_mse(c, t), Error);
}

TEST_CASE("parallel loop") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 7, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) {
        CHECK(h == 1);
    }
    CHECK_THROWS_AS(parallel_for(100, 4, [](std::size_t i) {
                        if (i == 60) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    CHECK(resolve_workers(3) == 3);
    setenv("TRINE_WORKERS", "6", 1);
    CHECK(default_workers() == 6);
    setenv("TRINE_WORKERS", "zero", 1);
    CHECK_THROWS_AS(default_workers(), Error);
    unsetenv("TRINE_WORKERS");
    CHECK(default_workers() >= 1);
}
