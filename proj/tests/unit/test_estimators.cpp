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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "trine/errors.hpp"
#include "trine/estimators.hpp"

using namespace trine;
using std::numbers::pi;

namespace {

CountVector cv(int a, int b, int c) { return CountVector{{a, b, c}}; }

void near(const ProbTriple &got, double a, double b, double c, double tol) {
    CHECK(std::abs(got[0] - a) < tol);
    CHECK(std::abs(got[1] - b) < tol);
    CHECK(std::abs(got[2] - c) < tol);
}

std::vector<EstimatorSpec> all_kinds() {
    std::vector<EstimatorSpec> out;
    for (EstimatorKind k : {EstimatorKind::MeanTrine, EstimatorKind::ClassicalMinimax,
                            EstimatorKind::CorrectedMinimax, EstimatorKind::MlTrine,
                            EstimatorKind::MeanDetWeight}) {
        EstimatorSpec s;
        s.kind = k;
        s.beta = k == EstimatorKind::MeanTrine ? 0.7 : 1.3;
        s.lambda = 0.2;
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("mean estimate at one click is exact") {
    const MomentTable t = MomentTable::build(4);
    const auto q = mean_estimate_exact(cv(1, 0, 0), 1, t);
    CHECK(q[0] == mpq_class(5, 12));
    CHECK(q[1] == mpq_class(7, 24));
    CHECK(q[2] == mpq_class(7, 24));
    CHECK(q[0] + q[1] + q[2] == 1);
    MomentEngine e;
    near(mean_estimate(cv(1, 0, 0), 1.0, e), 5.0 / 12, 7.0 / 24, 7.0 / 24, 1e-15);
    // Pulled toward the centre compared with the die value 1/2.
    CHECK(5.0 / 12 < classical_mean_estimate({1, 0, 0}, 1.0)[0]);
    CHECK(purity(mean_estimate(cv(1, 0, 0), 1.0, e)) == doctest::Approx(11.0 / 32));
}

TEST_CASE("integer-beta mean estimates sum to one exactly") {
    const MomentTable t = MomentTable::build(30);
    for (int beta : {1, 2, 3}) {
        for (int N : {1, 5, 12}) {
            for (const CountVector &c : enumerate_counts(N)) {
                const auto q = mean_estimate_exact(c, beta, t);
                CHECK(q[0] + q[1] + q[2] == 1);
            }
        }
    }
}

TEST_CASE("no data maps to the centre for every kind") {
    MomentEngine e;
    for (const EstimatorSpec &s : all_kinds()) {
        near(estimate(s, cv(0, 0, 0), e), 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
    }
    EstimatorSpec s;
    s.beta = 0.0;
    near(estimate(s, cv(0, 0, 0), e), 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
}

TEST_CASE("classical die minimax estimator") {
    near(classical_minimax_estimate(cv(4, 0, 0)), 7.0 / 9, 1.0 / 9, 1.0 / 9, 1e-15);
    near(classical_minimax_estimate(cv(2, 1, 1)), 4.0 / 9, 5.0 / 18, 5.0 / 18, 1e-15);
    near(classical_minimax_estimate(cv(7, 7, 7)), 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
    // Equals the die mean estimator at beta = sqrt(N)/K.
    const std::vector<int> n{5, 2, 1, 0};
    const auto a = classical_minimax_estimate(n);
    const auto b = classical_mean_estimate(n, std::sqrt(8.0) / 4.0);
    for (std::size_t k = 0; k < n.size(); ++k) {
        CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
    }
}

TEST_CASE("corrected minimax estimator") {
    // lambda = 0 leaves physical points alone.
    const ProbTriple phys = corrected_minimax_estimate(cv(5, 4, 3), 0.0);
    const ProbTriple raw = classical_minimax_estimate(cv(5, 4, 3));
    near(phys, raw[0], raw[1], raw[2], 1e-15);
    near(corrected_minimax_estimate(cv(9, 0, 1), 1.0), 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
    near(corrected_minimax_estimate(cv(4, 0, 0), 0.25), 2.0 / 3, 1.0 / 6, 1.0 / 6, 1e-15);
    // Below the unit radius after mixing: no clamp.
    const ProbTriple m = corrected_minimax_estimate(cv(4, 0, 0), 0.5);
    CHECK(bloch_radius(m) == doctest::Approx(2.0 / 3).epsilon(1e-14));
    // Any lambda keeps every estimate on the disk.
    for (double lambda : {0.0, 0.1, 0.3}) {
        for (const CountVector &c : enumerate_counts(25)) {
            CHECK(is_physical(corrected_minimax_estimate(c, lambda)));
        }
    }
    CHECK_THROWS_AS(corrected_minimax_estimate(cv(1, 0, 0), 1.5), Error);
}

TEST_CASE("smallest admixture that is physical for all data") {
    CHECK(lambda_min(4) == doctest::Approx(0.25));
    CHECK(lambda_min(1) == 0.0);
    double prev = -1.0;
    for (int N = 1; N <= 400; ++N) {
        // Independent route: radius of the classical estimate at (N, 0, 0).
        const double r = bloch_radius(classical_minimax_estimate(cv(N, 0, 0)));
        const double want = r <= 1.0 ? 0.0 : 1.0 - 1.0 / r;
        CHECK(lambda_min(N) == doctest::Approx(want).epsilon(1e-13));
        const ProbTriple fixed = mix_with_center(classical_minimax_estimate(cv(N, 0, 0)), lambda_min(N));
        CHECK(is_physical(fixed));
        CHECK(lambda_min(N) >= prev);
        prev = lambda_min(N);
    }
    CHECK(prev < 0.5);
    CHECK(prev > 0.45);
}

TEST_CASE("maximum likelihood examples") {
    near(ml_estimate(cv(2, 1, 1)), 0.5, 0.25, 0.25, 1e-15);
    near(ml_estimate(cv(4, 0, 0)), 2.0 / 3, 1.0 / 6, 1.0 / 6, 1e-12);
    near(ml_estimate(cv(1, 1, 1)), 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
    near(ml_estimate(cv(0, 0, 0)), 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
    // (1, 1, 0): the boundary maximum of p1 p2 is at phi = pi/3.
    near(ml_estimate(cv(1, 1, 0)), 0.5, 0.5, 0.0, 1e-12);
}

TEST_CASE("maximum likelihood dominates a dense reference grid") {
    const int nr = 200;
    const int nphi = 300;
    std::vector<std::array<double, 3>> logs;
    logs.reserve(static_cast<std::size_t>(nr * nphi + 1));
    for (int i = 1; i <= nr; ++i) {
        for (int j = 0; j < nphi; ++j) {
            const ProbTriple p = probs_from_state({static_cast<double>(i) / nr, 2.0 * pi * j / nphi});
            logs.push_back({std::log(p[0]), std::log(p[1]), std::log(p[2])});
        }
    }
    std::size_t violations = 0;
    for (int N = 1; N <= 20; ++N) {
        for (const CountVector &c : enumerate_counts(N)) {
            const ProbTriple ml = ml_estimate(c);
            CHECK(is_physical(ml));
            double ll = 0.0;
            for (int k = 0; k < 3; ++k) {
                if (c[k] > 0) {
                    ll += c[k] * std::log(ml[k]);
                }
            }
            for (const auto &g : logs) {
                double v = 0.0;
                for (int k = 0; k < 3; ++k) {
                    if (c[k] > 0) {
                        v += c[k] * g[static_cast<std::size_t>(k)];
                    }
                }
                if (v > ll + 1e-12 * std::max(1.0, std::abs(ll))) {
                    ++violations;
                    break;
                }
            }
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("estimates are permutation covariant") {
    MomentEngine e;
    for (const EstimatorSpec &s : all_kinds()) {
        for (const CountVector c : {cv(5, 2, 0), cv(3, 3, 1), cv(9, 0, 0), cv(4, 1, 2)}) {
            std::array<int, 3> perm{0, 1, 2};
            const ProbTriple base = estimate(s, c, e);
            do {
                CountVector pc;
                for (int k = 0; k < 3; ++k) {
                    pc[k] = c[perm[static_cast<std::size_t>(k)]];
                }
                const ProbTriple pe = estimate(s, pc, e);
                for (int k = 0; k < 3; ++k) {
                    CHECK(std::abs(pe[k] - base[perm[static_cast<std::size_t>(k)]]) < 1e-12);
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
}

TEST_CASE("larger integer beta shrinks toward the centre") {
    MomentEngine e;
    std::size_t violations = 0;
    for (int N = 1; N <= 20; ++N) {
        for (const CountVector &c : enumerate_counts(N)) {
            double prev = 2.0;
            for (int beta = 1; beta <= 4; ++beta) {
                const double r = bloch_radius(mean_estimate(c, beta, e));
                violations += r > prev + 1e-13;
                prev = r;
            }
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("fractional beta renormalisation diagnostics") {
    MomentEngine e;
    EstimateDiagnostics d;
    const ProbTriple p = mean_estimate(cv(3, 1, 0), 0.4, e, &d);
    CHECK(std::abs(p.sum() - 1.0) < 1e-15);
    CHECK(d.sum_deviation < 0.05);
    CHECK(is_physical(p));
    EstimateDiagnostics d1;
    (void)mean_estimate(cv(3, 1, 0), 1.0, e, &d1);
    CHECK(d1.sum_deviation < 1e-14);
}

TEST_CASE("det weight mean estimator") {
    MomentEngine e;
    near(det_weight_mean_estimate(cv(1, 0, 0), 1.0, e), 5.0 / 12, 7.0 / 24, 7.0 / 24, 1e-8);
    const ProbTriple b2 = det_weight_mean_estimate(cv(1, 0, 0), 2.0, e);
    CHECK(bloch_radius(b2) < bloch_radius(mean_estimate(cv(1, 0, 0), 1.0, e)));
    for (const CountVector &c : enumerate_counts(12)) {
        const ProbTriple p = det_weight_mean_estimate(c, 0.6, e);
        CHECK(is_physical(p));
        CHECK(std::abs(p.sum() - 1.0) < 1e-9);
    }
}

TEST_CASE("estimate tables") {
    MomentEngine e;
    EstimatorSpec s;
    const EstimateTable t1 = build_estimate_table(1, s, e, 1);
    REQUIRE(t1.entries.size() == 3);
    near(t1(cv(1, 0, 0)), 5.0 / 12, 7.0 / 24, 7.0 / 24, 1e-15);
    near(t1(cv(0, 1, 0)), 7.0 / 24, 5.0 / 12, 7.0 / 24, 1e-15);
    near(t1(cv(0, 0, 1)), 7.0 / 24, 7.0 / 24, 5.0 / 12, 1e-15);
    s.kind = EstimatorKind::MlTrine;
    const EstimateTable t2 = build_estimate_table(2, s, e, 2);
    CHECK(t2.entries.size() == 6);
    for (const ProbTriple &p : t2.entries) {
        CHECK(is_physical(p));
    }
    const EstimateTable t0 = build_estimate_table(0, s, e, 1);
    REQUIRE(t0.entries.size() == 1);
    near(t0.entries[0], 1.0 / 3, 1.0 / 3, 1.0 / 3, 1e-15);
    // Worker count does not change a single bit.
    s.kind = EstimatorKind::MeanTrine;
    s.beta = 0.35;
    const EstimateTable a = build_estimate_table(17, s, e, 1);
    const EstimateTable b = build_estimate_table(17, s, e, 4);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].p == b.entries[i].p);
    }
    s.kind = EstimatorKind::ClassicalMinimax;
    const EstimateTable c = build_estimate_table(4, s, e, 1);
    CHECK_FALSE(is_physical(c(cv(4, 0, 0))));
}

TEST_CASE("spec validation and names") {
    EstimatorSpec s;
    s.beta = -0.1;
    CHECK_THROWS_AS(validate(s), Error);
    s = {};
    s.kind = EstimatorKind::MeanDetWeight;
    s.beta = 0.0;
    CHECK_THROWS_AS(validate(s), Error);
    s = {};
    s.kind = EstimatorKind::CorrectedMinimax;
    s.lambda = 1.1;
    CHECK_THROWS_AS(validate(s), Error);
    for (const EstimatorSpec &k : all_kinds()) {
        CHECK(parse_estimator_kind(estimator_kind_name(k.kind)) == k.kind);
    }
    CHECK(parse_estimator_kind("ml") == EstimatorKind::MlTrine);
    CHECK_THROWS_AS(parse_estimator_kind("bogus"), Error);
}
