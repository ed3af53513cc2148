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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "trine/errors.hpp"
#include "trine/minimax.hpp"

using namespace trine;

namespace {

// A profile whose maximum is a prescribed function of the parameter.
RiskProfile fake(double value) {
    RiskProfile p;
    p.max.mse = value;
    p.min.mse = value / 2;
    return p;
}

GridSpec coarse() {
    GridSpec g;
    g.radial = 10;
    g.angular = 12;
    g.refine_levels = 1;
    return g;
}

} // namespace

TEST_CASE("golden section on a parabola") {
    SearchOptions o;
    o.lower = 0.0;
    o.upper = 3.0;
    o.tol = 1e-10;
    int calls = 0;
    const MinimaxResult r = minimise_max_mse(o, [&](double t) {
        ++calls;
        return fake(1.0 + (t - 1.3) * (t - 1.3));
    });
    CHECK(r.optimum == doctest::Approx(1.3).epsilon(1e-4));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.converged);
    CHECK(r.local_minima == 1);
    CHECK(r.min_mse == doctest::Approx(0.5).epsilon(1e-9));
    // 1% band: (t - 1.3)^2 <= 0.01, read off the interpolated samples.
    CHECK(r.flat_low == doctest::Approx(1.2).epsilon(1e-2));
    CHECK(r.flat_high == doctest::Approx(1.4).epsilon(1e-2));
    for (const MinimaxSample &s : r.samples) {
        CHECK(r.value <= s.max_mse);
    }
    CHECK(std::is_sorted(r.samples.begin(), r.samples.end(),
                         [](const MinimaxSample &a, const MinimaxSample &b) { return a.parameter < b.parameter; }));
    CHECK(static_cast<std::size_t>(calls) == r.samples.size());
}

TEST_CASE("two local minima: the lower wins") {
    SearchOptions o;
    o.lower = 0.0;
    o.upper = 4.0;
    o.tol = 1e-9;
    const MinimaxResult r = minimise_max_mse(o, [](double t) {
        const double a = 1.0 + 4.0 * (t - 0.8) * (t - 0.8);
        const double b = 0.9 + 4.0 * (t - 3.1) * (t - 3.1);
        return fake(std::min(a, b));
    });
    CHECK(r.local_minima == 2);
    CHECK(r.optimum == doctest::Approx(3.1).epsilon(1e-3));
    CHECK(r.value == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("minimum at the edges") {
    SearchOptions o;
    o.lower = 0.0;
    o.upper = 2.0;
    try {
        (void)minimise_max_mse(o, [](double t) { return fake(5.0 - t); });
        FAIL("expected a range error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::Range);
    }
    const MinimaxResult r = minimise_max_mse(o, [](double t) { return fake(1.0 + t); });
    CHECK(r.optimum == 0.0);
    CHECK(r.at_lower_edge);
    CHECK(r.flat_low == 0.0);
    o.scan_step = 0.0;
    CHECK_THROWS_AS(minimise_max_mse(o, [](double t) { return fake(t); }), Error);
}

TEST_CASE("beta search at small N") {
    MomentEngine e;
    const GridSpec g = coarse();
    const MinimaxResult a = optimal_beta(12, e, g, 1e-4, 0.0, -1.0, 1);
    CHECK(a.N == 12);
    CHECK(a.kind == EstimatorKind::MeanTrine);
    CHECK(a.optimum >= 0.0);
    CHECK(a.optimum < std::sqrt(12.0) / 3.0);
    for (const MinimaxSample &s : a.samples) {
        CHECK(a.value <= s.max_mse);
    }
    CHECK(a.flat_low <= a.optimum);
    CHECK(a.flat_high >= a.optimum);
    // Same answer with more workers, to the last bit.
    MomentEngine e2;
    const MinimaxResult b = optimal_beta(12, e2, g, 1e-4, 0.0, -1.0, 3);
    CHECK(a.optimum == b.optimum);
    CHECK(a.value == b.value);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].max_mse == b.samples[i].max_mse);
    }
    CHECK(default_beta_upper(36) == doctest::Approx(3.0));
    CHECK_THROWS_AS(optimal_beta(0, e, g), Error);
    CHECK_THROWS_AS(optimal_beta(5, e, g, 1e-4, -1.0), Error);
}

TEST_CASE("lambda search and sweep") {
    const GridSpec g = coarse();
    const MinimaxResult l = optimal_lambda(16, g, 1e-4, 1);
    CHECK(l.kind == EstimatorKind::CorrectedMinimax);
    CHECK(l.optimum >= 0.0);
    CHECK(l.optimum <= 1.0);
    // Corrected risk is close to flat over the states.
    CHECK(l.value / l.min_mse < 2.0);

    MomentEngine e;
    const auto recs = sweep({9, 16}, {EstimatorKind::MeanTrine, EstimatorKind::MlTrine,
                                      EstimatorKind::CorrectedMinimax},
                            e, g, 1e-4, 1);
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].N == 9);
    CHECK(recs[5].kind == EstimatorKind::CorrectedMinimax);
    CHECK(recs[5].parameter == l.optimum);
    CHECK(recs[5].max_mse == l.value);
    for (const SweepRecord &r : recs) {
        CHECK(r.min_mse <= r.max_mse);
    }
    CHECK(recs[1].parameter == 0.0);
}
