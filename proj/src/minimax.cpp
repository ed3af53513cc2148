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

#include "trine/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "trine/errors.hpp"

namespace trine {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

struct Evaluated {
    double max_mse;
    double min_mse;
    BlochState argmax;
    BlochState argmin;
};

} // namespace

MinimaxResult minimise_max_mse(const SearchOptions &options,
                               const std::function<RiskProfile(double)> &profile_at) {
    require(options.upper > options.lower && options.scan_step > 0.0, ErrorCode::InvalidArgument,
            "search range must be non-empty with a positive scan step");
    require(options.tol > 0.0, ErrorCode::InvalidArgument, "search tolerance must be positive");

    std::map<double, Evaluated> seen;
    auto g = [&](double t) {
        auto it = seen.find(t);
        if (it == seen.end()) {
            const RiskProfile p = profile_at(t);
            it = seen.emplace(t, Evaluated{p.max.mse, p.min.mse, p.max.state, p.min.state}).first;
        }
        return it->second.max_mse;
    };

    std::vector<double> scan;
    for (int i = 0;; ++i) {
        const double t = options.lower + i * options.scan_step;
        if (t > options.upper - 1e-12) {
            break;
        }
        scan.push_back(t);
    }
    scan.push_back(options.upper);
    std::vector<double> gs;
    for (double t : scan) {
        gs.push_back(g(t));
    }
    const std::size_t last = scan.size() - 1;
    const auto best_scan =
        static_cast<std::size_t>(std::min_element(gs.begin(), gs.end()) - gs.begin());
    if (best_scan == last) {
        std::ostringstream msg;
        msg << "max-MSE is smallest at the upper edge " << options.upper
            << " of the search range; widen the range";
        fail(ErrorCode::Range, msg.str());
    }

    MinimaxResult out;
    out.converged = true;
    for (std::size_t i = 0; i < last; ++i) {
        const bool left_ok = i == 0 || gs[i] < gs[i - 1];
        if (!left_ok || gs[i] > gs[i + 1]) {
            continue;
        }
        ++out.local_minima;
        double a = i == 0 ? scan[0] : scan[i - 1];
        double b = scan[i + 1];
        double c = b - kInvPhi * (b - a);
        double d = a + kInvPhi * (b - a);
        bool done = false;
        for (int iter = 0; iter < options.max_iterations; ++iter) {
            const double gc = g(c);
            const double gd = g(d);
            const double low = std::min(gc, gd);
            const double high = std::max({g(a), g(b), gc, gd});
            if (high - low <= options.tol * low || b - a < 1e-9) {
                done = true;
                break;
            }
            ++out.golden_iterations;
            if (gc < gd) {
                b = d;
                d = c;
                c = b - kInvPhi * (b - a);
            } else {
                a = c;
                c = d;
                d = a + kInvPhi * (b - a);
            }
        }
        out.converged = out.converged && done;
    }

    for (const auto &[t, e] : seen) {
        out.samples.push_back(MinimaxSample{t, e.max_mse, e.min_mse});
    }
    std::size_t opt = 0;
    for (std::size_t i = 1; i < out.samples.size(); ++i) {
        if (out.samples[i].max_mse < out.samples[opt].max_mse) {
            opt = i;
        }
    }
    out.optimum = out.samples[opt].parameter;
    const Evaluated &best = seen.at(out.optimum);
    out.value = best.max_mse;
    out.min_mse = best.min_mse;
    out.argmax = best.argmax;
    out.argmin = best.argmin;
    out.at_lower_edge = out.optimum == options.lower;

    const double threshold = 1.01 * out.value;
    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const MinimaxSample &s = out.samples[inside];
        const MinimaxSample &o = out.samples[outside];
        const double f = (threshold - s.max_mse) / (o.max_mse - s.max_mse);
        return s.parameter + f * (o.parameter - s.parameter);
    };
    out.flat_low = out.samples.front().parameter;
    for (std::size_t i = opt; i > 0; --i) {
        if (out.samples[i - 1].max_mse > threshold) {
            out.flat_low = crossing(i, i - 1);
            break;
        }
    }
    out.flat_high = out.samples.back().parameter;
    for (std::size_t i = opt; i + 1 < out.samples.size(); ++i) {
        if (out.samples[i + 1].max_mse > threshold) {
            out.flat_high = crossing(i, i + 1);
            break;
        }
    }
    return out;
}

double default_beta_upper(int N) { return std::sqrt(static_cast<double>(N)) / 3.0 + 1.0; }

MinimaxResult optimal_beta(int N, MomentEngine &engine, const GridSpec &grid, double tol,
                           double beta_lo, double beta_hi, int workers) {
    require(N >= 1, ErrorCode::InvalidArgument, "minimax search needs N >= 1");
    require(beta_lo >= 0.0, ErrorCode::InvalidArgument, "beta range must start at or above 0");
    SearchOptions opt;
    opt.lower = beta_lo;
    opt.upper = beta_hi < 0.0 ? default_beta_upper(N) : beta_hi;
    opt.scan_step = 0.25;
    opt.tol = tol;
    MinimaxResult r = minimise_max_mse(opt, [&](double beta) {
        EstimatorSpec spec;
        spec.kind = EstimatorKind::MeanTrine;
        spec.beta = beta;
        return mse_profile(grid, N, spec, engine, workers);
    });
    r.N = N;
    r.kind = EstimatorKind::MeanTrine;
    return r;
}

MinimaxResult optimal_lambda(int N, const GridSpec &grid, double tol, int workers) {
    require(N >= 1, ErrorCode::InvalidArgument, "minimax search needs N >= 1");
    SearchOptions opt;
    opt.lower = 0.0;
    opt.upper = 1.0;
    opt.scan_step = 0.05;
    opt.tol = tol;
    MomentEngine unused;
    MinimaxResult r = minimise_max_mse(opt, [&](double lambda) {
        EstimatorSpec spec;
        spec.kind = EstimatorKind::CorrectedMinimax;
        spec.lambda = lambda;
        return mse_profile(grid, N, spec, unused, workers);
    });
    r.N = N;
    r.kind = EstimatorKind::CorrectedMinimax;
    return r;
}

std::vector<SweepRecord> sweep(const std::vector<int> &N_list,
                               const std::vector<EstimatorKind> &kinds, MomentEngine &engine,
                               const GridSpec &grid, double tol, int workers, double det_beta) {
    std::vector<SweepRecord> out;
    for (int N : N_list) {
        require(N >= 1, ErrorCode::InvalidArgument, "sweep totals must be >= 1");
        for (EstimatorKind kind : kinds) {
            SweepRecord rec;
            rec.N = N;
            rec.kind = kind;
            if (kind == EstimatorKind::MeanTrine || kind == EstimatorKind::CorrectedMinimax) {
                rec.search = kind == EstimatorKind::MeanTrine
                                 ? optimal_beta(N, engine, grid, tol, 0.0, -1.0, workers)
                                 : optimal_lambda(N, grid, tol, workers);
                rec.parameter = rec.search.optimum;
                rec.max_mse = rec.search.value;
                rec.min_mse = rec.search.min_mse;
                rec.argmax = rec.search.argmax;
                rec.argmin = rec.search.argmin;
            } else {
                EstimatorSpec spec;
                spec.kind = kind;
                spec.beta = det_beta;
                const RiskProfile p = mse_profile(grid, N, spec, engine, workers);
                rec.parameter = spec.parameter();
                rec.max_mse = p.max.mse;
                rec.min_mse = p.min.mse;
                rec.argmax = p.max.state;
                rec.argmin = p.min.state;
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace trine
