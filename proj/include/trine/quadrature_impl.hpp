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

#pragma once

#include <cmath>
#include <numbers>
#include <type_traits>

namespace trine {

template <class F>
QuadResult tanh_sinh(F &&f, double length, double rel_tol, int min_level, int max_level,
                     double t_max) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    QuadResult out;
    auto node = [&](double t) {
        const double y = half_pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(y));
        const double near = length * e / (1.0 + e);
        const double far = length / (1.0 + e);
        const double w = length * half_pi * std::cosh(t) * 2.0 * e / ((1.0 + e) * (1.0 + e));
        ++out.evaluations;
        if (near <= 0.0) {
            return 0.0;
        }
        const double a = t < 0.0 ? near : far;
        const double b = t < 0.0 ? far : near;
        if constexpr (std::is_invocable_v<F &, double, double, double>) {
            return w * f(a, b, w);
        } else {
            return w * f(a, b);
        }
    };

    double raw = node(0.0);
    const int k_max = static_cast<int>(std::floor(t_max));
    for (int k = 1; k <= k_max; ++k) {
        raw += node(k) + node(-k);
    }
    double previous = raw;
    double before = raw;
    double h = 1.0;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        for (double t = h; t <= t_max; t += 2.0 * h) {
            raw += node(t) + node(-t);
        }
        const double current = raw * h;
        out.value = current;
        out.step = h;
        // Convergence is quadratic in the level, so the last two differences
        // predict the error of the current sum (extrapolated as e1^(ln e1 / ln e2)).
        const double scale = std::abs(current);
        const double e1 = std::abs(current - previous);
        const double e2 = std::abs(current - before);
        out.error = e1;
        if (level >= 2 && scale > 0.0 && e1 > 0.0 && e2 > 0.0 && e1 < scale && e2 < scale) {
            const double d1 = std::log(e1 / scale);
            const double d2 = std::log(e2 / scale);
            if (d2 < d1) {
                out.error = scale * std::max(std::exp(d1 * d1 / d2), std::exp(2.0 * d1));
            }
        }
        before = previous;
        previous = current;
        if (level >= min_level && out.error <= rel_tol * scale) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

} // namespace trine
