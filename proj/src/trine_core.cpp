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

#include "trine/trine_core.hpp"

#include <cmath>
#include <limits>

#include "trine/errors.hpp"

namespace trine {

void check_counts(const CountVector &counts) {
    for (int k = 0; k < 3; ++k) {
        if (counts[k] < 0) {
            fail(ErrorCode::InvalidArgument, "count vector entries must be non-negative");
        }
    }
}

ProbTriple probs_from_state(const BlochState &state, const TrineConfig &config) {
    ProbTriple out;
    for (int k = 0; k < 3; ++k) {
        out[k] = (1.0 + state.r * std::cos(state.phi - config.angle(k))) / 3.0;
    }
    return out;
}

BlochState state_from_probs(const ProbTriple &probs, const TrineConfig &config) {
    double x = 0.0;
    double y = 0.0;
    for (int k = 0; k < 3; ++k) {
        x += probs[k] * std::cos(config.angle(k));
        y += probs[k] * std::sin(config.angle(k));
    }
    BlochState s;
    s.r = 2.0 * std::hypot(x, y);
    if (s.r < 1e-14) {
        s.phi = 0.0;
        return s;
    }
    double phi = std::atan2(y, x);
    // Rounding on either side of the positive x axis lands on 0, not 2pi.
    if (std::abs(phi) < 1e-13) {
        phi = 0.0;
    } else if (phi < 0.0) {
        phi += kTwoPi;
    }
    s.phi = phi;
    return s;
}

double bloch_radius(const ProbTriple &probs) {
    // r^2 = 6 p^2 - 2 for probabilities that sum to one; the Cartesian form
    // below stays accurate near the centre.
    const double a = probs[0] - 0.5 * (probs[1] + probs[2]);
    const double b = (std::sqrt(3.0) / 2.0) * (probs[1] - probs[2]);
    return 2.0 * std::hypot(a, b);
}

double purity(const ProbTriple &probs) {
    return probs[0] * probs[0] + probs[1] * probs[1] + probs[2] * probs[2];
}

bool is_physical(const ProbTriple &probs, double tol) {
    for (int k = 0; k < 3; ++k) {
        if (!(probs[k] >= -tol)) {
            return false;
        }
    }
    if (!(std::abs(probs.sum() - 1.0) <= tol)) {
        return false;
    }
    return purity(probs) <= 0.5 + tol;
}

ProbTriple mix_with_center(const ProbTriple &probs, double lambda) {
    ProbTriple out;
    for (int k = 0; k < 3; ++k) {
        out[k] = (1.0 - lambda) * probs[k] + lambda / 3.0;
    }
    return out;
}

ProbTriple clamp_radius(const ProbTriple &probs, double radius) {
    const double r = bloch_radius(probs);
    if (r <= radius) {
        return probs;
    }
    const double scale = radius / r;
    ProbTriple out;
    for (int k = 0; k < 3; ++k) {
        out[k] = 1.0 / 3.0 + scale * (probs[k] - 1.0 / 3.0);
    }
    return out;
}

double squared_distance(const ProbTriple &a, const ProbTriple &b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

std::array<double, 4> density_matrix(const ProbTriple &probs, const TrineConfig &config) {
    // Lambda_k = 1/2 + sigma_z cos(phi_k) + sigma_x sin(phi_k).
    std::array<double, 4> rho{};
    for (int k = 0; k < 3; ++k) {
        const double c = std::cos(config.angle(k));
        const double s = std::sin(config.angle(k));
        rho[0] += probs[k] * (0.5 + c);
        rho[1] += probs[k] * s;
        rho[2] += probs[k] * s;
        rho[3] += probs[k] * (0.5 - c);
    }
    return rho;
}

double hilbert_schmidt_sq(const ProbTriple &a, const ProbTriple &b, const TrineConfig &config) {
    const auto ra = density_matrix(a, config);
    const auto rb = density_matrix(b, config);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double d = ra[i] - rb[i];
        s += d * d;
    }
    return s;
}

std::vector<CountVector> enumerate_counts(int N) {
    require(N >= 0, ErrorCode::InvalidArgument, "total count must be non-negative");
    std::vector<CountVector> out;
    out.reserve(level_size(N));
    for (int a = 0; a <= N; ++a) {
        for (int b = 0; a + b <= N; ++b) {
            out.push_back(CountVector{{a, b, N - a - b}});
        }
    }
    return out;
}

double log_multinomial_weight(const CountVector &counts, const ProbTriple &probs) {
    const int N = counts.total();
    double w = std::lgamma(N + 1.0);
    for (int k = 0; k < 3; ++k) {
        w -= std::lgamma(counts[k] + 1.0);
        if (counts[k] == 0) {
            continue;
        }
        if (probs[k] <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        w += counts[k] * std::log(probs[k]);
    }
    return w;
}

LogFactorials::LogFactorials(int n_max) { ensure(n_max); }

void LogFactorials::ensure(int n_max) {
    if (table_.empty()) {
        table_.push_back(0.0);
    }
    while (static_cast<int>(table_.size()) <= n_max) {
        table_.push_back(std::lgamma(static_cast<double>(table_.size()) + 1.0));
    }
}

} // namespace trine
