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
 * Geometry of the trine measurement on a qubit confined to the x-z plane of
 * the Bloch sphere, together with the count-vector vocabulary shared by the
 * rest of the library.
 *
 * A planar qubit state with Bloch coordinates (r, phi) produces outcome
 * probabilities p_k = [1 + r cos(phi - phi_k)] / 3 for the three trine
 * outcomes, phi_k = phi_0 + (k - 1) 2 pi / 3. Physical states fill the disk
 * inscribed in the probability simplex, i.e. sum_k p_k^2 <= 1/2.
 */

#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

namespace trine {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kTrineStep = kTwoPi / 3.0;

/// Default tolerance of the physicality predicates.
inline constexpr double kPhysicalTolerance = 1e-9;

/// Orientation of the trine in the plane; phi_k = phi0 + k * 2 pi / 3 with
/// zero-based k.
struct TrineConfig {
    double phi0 = 0.0;

    double angle(int k) const { return phi0 + k * kTrineStep; }
};

/// Polar Bloch coordinates of a planar qubit: r in [0, 1], phi in [0, 2 pi).
struct BlochState {
    double r = 0.0;
    double phi = 0.0;
};

struct ProbTriple {
    std::array<double, 3> p{};

    double operator[](int k) const { return p[k]; }
    double &operator[](int k) { return p[k]; }
    double sum() const { return p[0] + p[1] + p[2]; }
};

inline ProbTriple center_probs() { return {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}; }

/// Click tallies (n1, n2, n3); all entries non-negative.
struct CountVector {
    std::array<int, 3> n{};

    constexpr int operator[](int k) const { return n[k]; }
    constexpr int &operator[](int k) { return n[k]; }
    constexpr int total() const { return n[0] + n[1] + n[2]; }
    constexpr int min() const {
        return n[0] < n[1] ? (n[0] < n[2] ? n[0] : n[2]) : (n[1] < n[2] ? n[1] : n[2]);
    }

    friend constexpr bool operator==(const CountVector &, const CountVector &) = default;
};

/// n + e_k (zero-based k).
constexpr CountVector increment(CountVector c, int k) {
    ++c.n[k];
    return c;
}

/// Validates that every entry is non-negative (throws InvalidArgument).
void check_counts(const CountVector &counts);

ProbTriple probs_from_state(const BlochState &state, const TrineConfig &config = {});

/// Inverse of probs_from_state. The returned radius exceeds 1 for outcome
/// probabilities outside the physical disk; callers decide what to do with it.
/// phi is normalised to [0, 2 pi) and reported as 0 when r < 1e-14.
BlochState state_from_probs(const ProbTriple &probs, const TrineConfig &config = {});

double bloch_radius(const ProbTriple &probs);

/// sum_k p_k^2.
double purity(const ProbTriple &probs);

bool is_physical(const ProbTriple &probs, double tol = kPhysicalTolerance);

/// (1 - lambda) p + lambda (1/3, 1/3, 1/3).
ProbTriple mix_with_center(const ProbTriple &probs, double lambda);

/// Rescales the Bloch vector so that its length is at most `radius`.
ProbTriple clamp_radius(const ProbTriple &probs, double radius = 1.0);

/// Squared Euclidean distance sum_k (a_k - b_k)^2.
double squared_distance(const ProbTriple &a, const ProbTriple &b);

/// Real symmetric 2x2 density matrix sum_k p_k Lambda_k in the (sigma_z,
/// sigma_x) basis, stored row-major.
std::array<double, 4> density_matrix(const ProbTriple &probs, const TrineConfig &config = {});

/// tr[(rho_a - rho_b)^2].
double hilbert_schmidt_sq(const ProbTriple &a, const ProbTriple &b, const TrineConfig &config = {});

/// Number of count vectors with total N: (N + 1)(N + 2) / 2.
constexpr std::size_t level_size(int N) {
    return static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(N + 2) / 2;
}

/// Position of `counts` in the lexicographic (n1, n2) order used by
/// enumerate_counts for its total.
constexpr std::size_t count_index(const CountVector &counts) {
    const auto N = static_cast<std::size_t>(counts.total());
    const auto a = static_cast<std::size_t>(counts[0]);
    return a * (N + 1) - a * (a - 1) / 2 + static_cast<std::size_t>(counts[1]);
}

/// All count vectors with total N, lexicographic in (n1, n2):
/// N = 1 gives (0,0,1), (0,1,0), (1,0,0).
std::vector<CountVector> enumerate_counts(int N);

/// ln[N! / (n1! n2! n3!)] + sum_k n_k ln p_k; -infinity when a zero-probability
/// outcome has clicks.
double log_multinomial_weight(const CountVector &counts, const ProbTriple &probs);

/// ln n! for n = 0..n_max, cached for the multinomial sums.
class LogFactorials {
  public:
    explicit LogFactorials(int n_max = 0);
    void ensure(int n_max);
    double operator()(int n) const { return table_[static_cast<std::size_t>(n)]; }
    int size() const { return static_cast<int>(table_.size()); }

  private:
    std::vector<double> table_;
};

} // namespace trine
