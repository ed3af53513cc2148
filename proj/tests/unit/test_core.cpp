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
#include <numbers>
#include <random>

#include "doctest.h"
#include "trine/errors.hpp"
#include "trine/trine_core.hpp"

using namespace trine;
using std::numbers::pi;

namespace {

void check_probs(const ProbTriple &got, double a, double b, double c, double tol = 1e-15) {
    CHECK(got[0] == doctest::Approx(a).epsilon(tol));
    CHECK(got[1] == doctest::Approx(b).epsilon(tol));
    CHECK(got[2] == doctest::Approx(c).epsilon(tol));
}

double angle_gap(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return std::min(d, 2.0 * pi - d);
}

} // namespace

TEST_CASE("probabilities from Bloch coordinates") {
    check_probs(probs_from_state({0.0, 1.234}), 1.0 / 3, 1.0 / 3, 1.0 / 3);
    check_probs(probs_from_state({1.0, 0.0}), 2.0 / 3, 1.0 / 6, 1.0 / 6);
    const ProbTriple p = probs_from_state({1.0, pi});
    CHECK(std::abs(p[0]) < 1e-16);
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(p[2] == doctest::Approx(0.5));
}

TEST_CASE("Bloch coordinates from probabilities") {
    BlochState s = state_from_probs({{1.0 / 3, 1.0 / 3, 1.0 / 3}});
    CHECK(s.r < 1e-15);
    CHECK(s.phi == 0.0);
    s = state_from_probs({{2.0 / 3, 1.0 / 6, 1.0 / 6}});
    CHECK(s.r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.phi == 0.0);
    s = state_from_probs({{7.0 / 9, 1.0 / 9, 1.0 / 9}});
    CHECK(s.r == doctest::Approx(4.0 / 3).epsilon(1e-15));
    CHECK(s.phi == 0.0);
}

TEST_CASE("rotated trine orientation") {
    const TrineConfig cfg{0.3};
    const ProbTriple p = probs_from_state({0.8, 0.3}, cfg);
    check_probs(p, (1 + 0.8) / 3, (1 - 0.4) / 3, (1 - 0.4) / 3, 1e-14);
    const BlochState s = state_from_probs(p, cfg);
    CHECK(s.r == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(angle_gap(s.phi, 0.3) < 1e-13);
}

TEST_CASE("purity and physicality") {
    CHECK(purity({{1.0 / 3, 1.0 / 3, 1.0 / 3}}) == doctest::Approx(1.0 / 3));
    CHECK(purity({{2.0 / 3, 1.0 / 6, 1.0 / 6}}) == doctest::Approx(0.5));
    CHECK(purity({{1.0, 0.0, 0.0}}) == 1.0);
    CHECK(is_physical({{1.0 / 3, 1.0 / 3, 1.0 / 3}}, 0.0));
    CHECK_FALSE(is_physical({{1.0, 0.0, 0.0}}, 1e-9));
    CHECK(is_physical({{0.5, 0.5, 0.0}}, 1e-9));
    CHECK_FALSE(is_physical({{0.6, 0.5, -0.1}}, 1e-9));
    CHECK_FALSE(is_physical({{0.4, 0.3, 0.2}}, 1e-9));
}

TEST_CASE("round trip and purity identity over a grid") {
    double worst_r = 0.0;
    double worst_phi = 0.0;
    double worst_purity = 0.0;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j < 40; ++j) {
            const BlochState s{i / 40.0, 2.0 * pi * j / 40.0};
            const ProbTriple p = probs_from_state(s);
            CHECK(std::abs(p.sum() - 1.0) < 1e-15);
            const BlochState back = state_from_probs(p);
            worst_r = std::max(worst_r, std::abs(back.r - s.r));
            if (s.r > 0.0) {
                worst_phi = std::max(worst_phi, angle_gap(back.phi, s.phi));
            }
            CHECK(back.phi >= 0.0);
            CHECK(back.phi < 2.0 * pi);
            worst_purity = std::max(worst_purity, std::abs(purity(p) - (1.0 + s.r * s.r / 2.0) / 3.0));
            CHECK(std::abs(bloch_radius(p) - s.r) < 1e-12);
        }
    }
    CHECK(worst_r < 1e-12);
    CHECK(worst_phi < 1e-12);
    CHECK(worst_purity < 1e-12);
}

TEST_CASE("trine covariance is a cyclic permutation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const double r = u(rng);
        const double phi = 2.0 * pi * u(rng);
        const ProbTriple a = probs_from_state({r, phi});
        const ProbTriple b = probs_from_state({r, phi + 2.0 * pi / 3.0});
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(b[(k + 1) % 3] - a[k]) < 1e-15);
        }
    }
}

TEST_CASE("mixing and clamping") {
    const ProbTriple c = mix_with_center({{7.0 / 9, 1.0 / 9, 1.0 / 9}}, 0.25);
    check_probs(c, 2.0 / 3, 1.0 / 6, 1.0 / 6, 1e-15);
    const ProbTriple d = clamp_radius({{7.0 / 9, 1.0 / 9, 1.0 / 9}}, 1.0);
    check_probs(d, 2.0 / 3, 1.0 / 6, 1.0 / 6, 1e-15);
    const ProbTriple e = clamp_radius({{0.4, 0.3, 0.3}}, 1.0);
    check_probs(e, 0.4, 0.3, 0.3);
    check_probs(mix_with_center({{0.2, 0.5, 0.3}}, 1.0), 1.0 / 3, 1.0 / 3, 1.0 / 3);
}

TEST_CASE("Hilbert-Schmidt distance is three times the squared probability distance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const BlochState a{u(rng), 2 * pi * u(rng)};
        const BlochState b{u(rng), 2 * pi * u(rng)};
        const ProbTriple pa = probs_from_state(a);
        const ProbTriple pb = probs_from_state(b);
        // Bloch-vector form of tr((rho_a - rho_b)^2): |a - b|^2 / 2.
        const double dx = a.r * std::cos(a.phi) - b.r * std::cos(b.phi);
        const double dz = a.r * std::sin(a.phi) - b.r * std::sin(b.phi);
        const double hs = 0.5 * (dx * dx + dz * dz);
        CHECK(hilbert_schmidt_sq(pa, pb) == doctest::Approx(hs).epsilon(1e-12));
        if (hs > 1e-6) {
            CHECK(hs / squared_distance(pa, pb) == doctest::Approx(3.0).epsilon(1e-10));
        }
    }
    const auto rho = density_matrix({{1.0 / 3, 1.0 / 3, 1.0 / 3}});
    CHECK(rho[0] == doctest::Approx(0.5));
    CHECK(rho[3] == doctest::Approx(0.5));
    CHECK(std::abs(rho[1]) < 1e-15);
}

TEST_CASE("count enumeration order and indexing") {
    CHECK(enumerate_counts(0).size() == 1);
    const auto one = enumerate_counts(1);
    REQUIRE(one.size() == 3);
    CHECK(one[0] == CountVector{{0, 0, 1}});
    CHECK(one[1] == CountVector{{0, 1, 0}});
    CHECK(one[2] == CountVector{{1, 0, 0}});
    CHECK(enumerate_counts(4).size() == 15);
    for (int N : {0, 1, 5, 17}) {
        const auto all = enumerate_counts(N);
        CHECK(all.size() == level_size(N));
        for (std::size_t i = 0; i < all.size(); ++i) {
            CHECK(all[i].total() == N);
            CHECK(count_index(all[i]) == i);
        }
    }
    CHECK_THROWS_AS(enumerate_counts(-1), Error);
}

TEST_CASE("multinomial log weights") {
    CHECK(log_multinomial_weight({{0, 0, 0}}, {{0.2, 0.3, 0.5}}) == 0.0);
    CHECK(log_multinomial_weight({{1, 0, 0}}, center_probs()) == doctest::Approx(std::log(1.0 / 3)));
    CHECK(log_multinomial_weight({{2, 1, 1}}, {{0.5, 0.25, 0.25}}) ==
          doctest::Approx(std::log(12.0 / 64)).epsilon(1e-14));
    CHECK(std::isinf(log_multinomial_weight({{1, 2, 0}}, {{0.0, 0.5, 0.5}})));
    CHECK(log_multinomial_weight({{0, 2, 1}}, {{0.0, 0.5, 0.5}}) ==
          doctest::Approx(std::log(3 * 0.125)));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int N : {1, 7, 23, 50}) {
        const ProbTriple p = probs_from_state({u(rng), 2 * pi * u(rng)});
        double total = 0.0;
        for (const CountVector &c : enumerate_counts(N)) {
            total += std::exp(log_multinomial_weight(c, p));
        }
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("log factorials") {
    LogFactorials lf(10);
    CHECK(lf(0) == 0.0);
    CHECK(lf(5) == doctest::Approx(std::log(120.0)));
    lf.ensure(300);
    CHECK(lf.size() >= 301);
    CHECK(lf(300) == doctest::Approx(std::lgamma(301.0)).epsilon(1e-14));
}
