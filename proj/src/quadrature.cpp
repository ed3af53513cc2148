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

#include "trine/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "trine/errors.hpp"

namespace trine {

namespace {

constexpr double kArc = kTrineStep;
constexpr int kMinLevel = 4;

// Upper estimate of max over the unit circle of sum_{a_k > 0} a_k ln p_k,
// used to keep the exponentials in range.
double reference_log(const std::array<double, 3> &a) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 0; k < 3; ++k) {
        any = any || a[k] > 0.0;
    }
    if (!any) {
        return 0.0;
    }
    constexpr int samples = 720;
    for (int i = 0; i < samples; ++i) {
        const double phi = kTwoPi * i / samples;
        double v = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (a[k] > 0.0) {
                const double p = (1.0 + std::cos(phi - k * kTrineStep)) / 3.0;
                v += p > 0.0 ? a[k] * std::log(p) : -std::numeric_limits<double>::infinity();
            }
        }
        best = std::max(best, v);
    }
    return best;
}

std::string describe(double beta, const CountVector &counts, MomentWeight weight) {
    std::ostringstream os;
    os << moment_weight_name(weight) << " moment at beta=" << beta << " n=(" << counts[0] << ","
       << counts[1] << "," << counts[2] << ")";
    return os.str();
}

} // namespace

void validate(const QuadratureSpec &spec) {
    require(spec.method == "tanh-sinh", ErrorCode::Unsupported,
            "unknown quadrature method '" + spec.method + "' (supported: tanh-sinh)");
    require(spec.rel_tol > 0.0 && spec.rel_tol < 1.0, ErrorCode::InvalidArgument,
            "quadrature tolerance must lie in (0, 1)");
    require(spec.max_level >= kMinLevel && spec.max_level <= 14, ErrorCode::InvalidArgument,
            "quadrature max_level must lie in [4, 14]");
}

const char *moment_weight_name(MomentWeight weight) {
    return weight == MomentWeight::PProduct ? "p-product" : "det-rho";
}

double log_moment_quadrature(double beta, const CountVector &counts, MomentWeight weight,
                             const QuadratureSpec &spec) {
    check_counts(counts);
    validate(spec);
    require(std::isfinite(beta), ErrorCode::InvalidArgument, "beta must be finite");
    if (weight == MomentWeight::PProduct) {
        require(beta >= 0.0, ErrorCode::InvalidArgument,
                "p-product weight needs beta >= 0 for a finite moment");
    } else {
        require(beta > 0.0, ErrorCode::InvalidArgument,
                "det-rho weight needs beta > 0 for a finite moment");
    }

    std::array<double, 3> a{};
    double det_power = 0.0;
    for (int k = 0; k < 3; ++k) {
        a[k] = counts[k] + (weight == MomentWeight::PProduct ? beta - 1.0 : 0.0);
    }
    if (weight == MomentWeight::DetRho) {
        det_power = beta - 1.0;
    }
    const double ref = reference_log(a);
    const double inner_tol = spec.rel_tol / 10.0;
    // Inner errors weighted like the values they perturb; the total is
    // converted into a relative error once the outer step is known.
    double inner_error_mass = 0.0;
    double last_inner_error = 0.0;

    // With non-negative integer exponents the angular integrand is a
    // trigonometric polynomial of degree sum(a), which the periodic trapezoid
    // rule on sum(a) + 1 points integrates exactly.
    bool polynomial = true;
    double degree = 0.0;
    for (double ak : a) {
        polynomial = polynomial && ak >= 0.0 && ak == std::floor(ak);
        degree += ak;
    }
    std::vector<std::array<double, 3>> cosines;
    if (polynomial) {
        const auto points = static_cast<std::size_t>(degree) + 1;
        cosines.resize(points);
        for (std::size_t j = 0; j < points; ++j) {
            const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(points);
            for (int k = 0; k < 3; ++k) {
                cosines[j][static_cast<std::size_t>(k)] = std::cos(phi - k * kTrineStep);
            }
        }
    }
    auto trapezoid = [&](double r) {
        double total = 0.0;
        for (const auto &c : cosines) {
            double e = -ref;
            for (std::size_t k = 0; k < 3; ++k) {
                if (a[k] != 0.0) {
                    e += a[k] * std::log((1.0 + r * c[k]) / 3.0);
                }
            }
            total += std::exp(e);
        }
        last_inner_error = 0.0;
        return total / static_cast<double>(cosines.size());
    };

    auto inner = [&](double u, double one_minus_u) {
        const double r = std::sqrt(one_minus_u * (1.0 + u));
        if (polynomial) {
            return trapezoid(r);
        }
        const double base = u * u / (1.0 + r);
        auto g = [&](double s, double rest) {
            std::array<double, 3> lp{};
            const double h0 = std::sin(0.5 * rest);
            const double h1 = std::sin(kArc - 0.5 * s);
            const double h2 = std::sin(0.5 * s);
            lp[0] = std::log((base + 2.0 * r * h0 * h0) / 3.0);
            lp[1] = std::log((base + 2.0 * r * h1 * h1) / 3.0);
            lp[2] = std::log((base + 2.0 * r * h2 * h2) / 3.0);
            double total = 0.0;
            for (int c = 0; c < 3; ++c) {
                double e = -ref;
                for (int j = 0; j < 3; ++j) {
                    const double aj = a[static_cast<std::size_t>((j + c) % 3)];
                    if (aj != 0.0) {
                        e += aj * lp[static_cast<std::size_t>(j)];
                    }
                }
                total += std::exp(e);
            }
            return total;
        };
        const QuadResult res = tanh_sinh(g, kArc, inner_tol, kMinLevel, spec.max_level);
        last_inner_error = res.converged ? 0.0 : res.error / kTwoPi;
        return res.value / kTwoPi;
    };

    auto outer = [&](double u, double one_minus_u, double node_weight) {
        const double F = inner(u, one_minus_u);
        double log_w = std::log(u);
        if (det_power != 0.0) {
            log_w += det_power * (2.0 * log_w + std::log(0.25));
        }
        const double scale = std::exp(log_w);
        inner_error_mass += node_weight * scale * last_inner_error;
        return F > 0.0 ? F * scale : 0.0;
    };

    const double t_max = (weight == MomentWeight::DetRho && beta < 0.5) ? 5.5 : 4.0;
    const QuadResult res = tanh_sinh(outer, 1.0, spec.rel_tol, kMinLevel, spec.max_level, t_max);
    const double worst_inner = res.value > 0.0 ? inner_error_mass * res.step / res.value : 0.0;
    if (!res.converged || worst_inner > spec.rel_tol) {
        std::ostringstream os;
        os << "quadrature did not reach relative tolerance " << spec.rel_tol << " for "
           << describe(beta, counts, weight) << " (outer estimate "
           << (res.value > 0.0 ? res.error / res.value : res.error) << ", worst inner "
           << worst_inner << ")";
        fail(ErrorCode::Convergence, os.str());
    }
    require(res.value > 0.0 && std::isfinite(res.value), ErrorCode::Convergence,
            "quadrature produced a non-positive value for " + describe(beta, counts, weight));
    return std::log(2.0) + ref + std::log(res.value);
}

double quadrature_moment_oracle(double beta, const CountVector &counts, MomentWeight weight,
                                const QuadratureSpec &spec) {
    return std::exp(log_moment_quadrature(beta, counts, weight, spec));
}

} // namespace trine
