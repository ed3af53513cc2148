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
 * Direct two-dimensional quadrature of disk moments
 *
 *   M(n) = 2 int_0^1 dr r int dphi/2pi  f(r, phi) prod_k p_k^{n_k}
 *
 * for the two weight families f = (p1 p2 p3)^{beta-1} and
 * f = det(rho)^{beta-1} = [(1 - r^2)/4]^{beta-1}.
 *
 * The radial variable is u = sqrt(1 - r^2) (so r dr = u du), and the angle
 * is split at the three boundary points where a p_k vanishes. On each arc
 * the integrand is evaluated from the distances to the arc ends, so
 * p_k = [u^2/(1+r) + 2 r sin^2(d_k/2)] / 3 carries no cancellation near the
 * zeros. Both directions use tanh-sinh rules, which absorb the integrable
 * endpoint behaviour left at beta = 0 and for small det-weight powers.
 */

#pragma once

#include <string>

#include "trine/trine_core.hpp"

namespace trine {

struct QuadratureSpec {
    std::string method = "tanh-sinh";
    /// Target relative accuracy of the moment.
    double rel_tol = 1e-10;
    /// Refinement cap: step 2^-max_level in the tanh-sinh variable.
    int max_level = 9;
};

void validate(const QuadratureSpec &spec);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    /// Step in the tanh-sinh variable at the last level.
    double step = 1.0;
    bool converged = false;
};

/// Tanh-sinh rule on [0, length]. `f(s, length - s)` receives both
/// distances to the ends, each accurate near its own end. A callable that
/// also accepts a third argument receives the node weight; the final sum is
/// the step of the last level times the weighted values.
template <class F>
QuadResult tanh_sinh(F &&f, double length, double rel_tol, int min_level, int max_level,
                     double t_max = 4.0);

enum class MomentWeight { PProduct, DetRho };

const char *moment_weight_name(MomentWeight weight);

/// ln M by direct quadrature. Throws Convergence when the tolerance is not
/// met within spec.max_level refinements, InvalidArgument for beta outside
/// the weight's domain (beta >= 0 for p-product, beta > 0 for det-rho).
double log_moment_quadrature(double beta, const CountVector &counts, MomentWeight weight,
                             const QuadratureSpec &spec = {});

/// exp(log_moment_quadrature(...)).
double quadrature_moment_oracle(double beta, const CountVector &counts, MomentWeight weight,
                                const QuadratureSpec &spec = {});

} // namespace trine

#include "trine/quadrature_impl.hpp"
