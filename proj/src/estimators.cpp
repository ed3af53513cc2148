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

#include "trine/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "trine/errors.hpp"
#include "trine/parallel.hpp"

namespace trine {

namespace {

constexpr double kSumTolerance = 0.05;

CountVector add_all(const CountVector &counts, int shift) {
    return CountVector{{counts[0] + shift, counts[1] + shift, counts[2] + shift}};
}

// Wraps an angle into (-pi, pi].
double wrap(double x) {
    x = std::remainder(x, kTwoPi);
    return x <= -std::numbers::pi ? x + kTwoPi : x;
}

// Renormalises moment ratios and enforces the disk.
ProbTriple finish_ratios(ProbTriple raw, bool renormalise, EstimateDiagnostics *diag) {
    const double s = raw.sum();
    const double deviation = std::abs(s - 1.0);
    EstimateDiagnostics local;
    local.sum_deviation = deviation;
    if (renormalise) {
        if (!(deviation <= kSumTolerance)) {
            std::ostringstream msg;
            msg << "moment ratios sum to " << s << ", further from 1 than " << kSumTolerance;
            fail(ErrorCode::Consistency, msg.str());
        }
        for (int k = 0; k < 3; ++k) {
            raw[k] /= s;
        }
    }
    if (purity(raw) > 0.5) {
        raw = clamp_radius(raw, 1.0);
        local.clamped = true;
    }
    if (diag != nullptr) {
        *diag = local;
    }
    return raw;
}

} // namespace

const char *estimator_kind_name(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::MeanTrine:
        return "mean-trine";
    case EstimatorKind::ClassicalMinimax:
        return "classical-minimax";
    case EstimatorKind::CorrectedMinimax:
        return "corrected-minimax";
    case EstimatorKind::MlTrine:
        return "ml-trine";
    case EstimatorKind::MeanDetWeight:
        return "mean-det-weight";
    }
    return "unknown";
}

EstimatorKind parse_estimator_kind(const std::string &name) {
    if (name == "mean" || name == "mean-trine") return EstimatorKind::MeanTrine;
    if (name == "classical" || name == "classical-minimax") return EstimatorKind::ClassicalMinimax;
    if (name == "corrected" || name == "corrected-minimax") return EstimatorKind::CorrectedMinimax;
    if (name == "ml" || name == "ml-trine") return EstimatorKind::MlTrine;
    if (name == "det" || name == "mean-det-weight") return EstimatorKind::MeanDetWeight;
    fail(ErrorCode::InvalidArgument,
         "unknown estimator '" + name + "' (expected mean, classical, corrected, ml or det)");
}

double EstimatorSpec::parameter() const {
    switch (kind) {
    case EstimatorKind::MeanTrine:
    case EstimatorKind::MeanDetWeight:
        return beta;
    case EstimatorKind::CorrectedMinimax:
        return lambda;
    default:
        return 0.0;
    }
}

void validate(const EstimatorSpec &spec) {
    switch (spec.kind) {
    case EstimatorKind::MeanTrine:
        require(std::isfinite(spec.beta) && spec.beta >= 0.0, ErrorCode::InvalidArgument,
                "mean-trine needs beta >= 0");
        break;
    case EstimatorKind::MeanDetWeight:
        require(std::isfinite(spec.beta) && spec.beta > 0.0, ErrorCode::InvalidArgument,
                "mean-det-weight needs beta > 0");
        break;
    case EstimatorKind::CorrectedMinimax:
        require(spec.lambda >= 0.0 && spec.lambda <= 1.0, ErrorCode::InvalidArgument,
                "corrected-minimax needs lambda in [0, 1]");
        break;
    case EstimatorKind::MlTrine:
        require(spec.ml_tol > 0.0 && spec.ml_tol < 1e-3, ErrorCode::InvalidArgument,
                "ml-trine needs an angular tolerance in (0, 1e-3)");
        break;
    case EstimatorKind::ClassicalMinimax:
        break;
    }
}

ProbTriple mean_estimate(const CountVector &counts, double beta, MomentEngine &engine,
                         EstimateDiagnostics *diag) {
    check_counts(counts);
    require(std::isfinite(beta) && beta >= 0.0, ErrorCode::InvalidArgument,
            "mean estimate needs beta >= 0");
    if (counts.total() == 0) {
        if (diag != nullptr) {
            *diag = {};
        }
        return center_probs();
    }
    ProbTriple raw;
    const bool integer = beta >= 1.0 && beta == std::floor(beta);
    if (integer) {
        const int shift = static_cast<int>(beta) - 1;
        const double base = engine.log_m1(add_all(counts, shift));
        for (int k = 0; k < 3; ++k) {
            raw[k] = std::exp(engine.log_m1(add_all(increment(counts, k), shift)) - base);
        }
    } else {
        const double base = engine.log_moment(beta, counts);
        for (int k = 0; k < 3; ++k) {
            raw[k] = std::exp(engine.log_moment(beta, increment(counts, k)) - base);
        }
    }
    return finish_ratios(raw, !integer, diag);
}

std::array<mpq_class, 3> mean_estimate_exact(const CountVector &counts, int beta,
                                             const MomentTable &table) {
    const mpq_class base = moment_integer_beta(table, beta, counts);
    std::array<mpq_class, 3> out;
    for (int k = 0; k < 3; ++k) {
        out[static_cast<std::size_t>(k)] = moment_integer_beta(table, beta, increment(counts, k)) / base;
    }
    return out;
}

std::vector<double> classical_minimax_estimate(const std::vector<int> &counts) {
    require(!counts.empty(), ErrorCode::InvalidArgument, "die estimate needs at least one outcome");
    long total = 0;
    for (int n : counts) {
        require(n >= 0, ErrorCode::InvalidArgument, "count vector entries must be non-negative");
        total += n;
    }
    const double K = static_cast<double>(counts.size());
    std::vector<double> out(counts.size(), 1.0 / K);
    if (total == 0) {
        return out;
    }
    const double root = std::sqrt(static_cast<double>(total));
    const double a = 1.0 / (1.0 + root);
    const double b = 1.0 / (1.0 + 1.0 / root);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        out[k] = a / K + b * static_cast<double>(counts[k]) / static_cast<double>(total);
    }
    return out;
}

ProbTriple classical_minimax_estimate(const CountVector &counts) {
    const auto v = classical_minimax_estimate(std::vector<int>(counts.n.begin(), counts.n.end()));
    return {{v[0], v[1], v[2]}};
}

std::vector<double> classical_mean_estimate(const std::vector<int> &counts, double beta) {
    require(std::isfinite(beta) && beta > 0.0, ErrorCode::InvalidArgument,
            "die mean estimate needs beta > 0");
    double total = 0.0;
    for (int n : counts) {
        require(n >= 0, ErrorCode::InvalidArgument, "count vector entries must be non-negative");
        total += n;
    }
    const double K = static_cast<double>(counts.size());
    std::vector<double> out(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        out[k] = (counts[k] + beta) / (total + K * beta);
    }
    return out;
}

ProbTriple corrected_minimax_estimate(const CountVector &counts, double lambda) {
    check_counts(counts);
    require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");
    return clamp_radius(mix_with_center(classical_minimax_estimate(counts), lambda), 1.0);
}

double lambda_min(int N) {
    require(N >= 1, ErrorCode::InvalidArgument, "lambda_min needs N >= 1");
    const double b = 1.0 / (1.0 + 1.0 / std::sqrt(static_cast<double>(N)));
    // The frequency vertex (1, 0, 0) has Bloch radius 2.
    const double r_max = 2.0 * b;
    return r_max <= 1.0 ? 0.0 : 1.0 - 1.0 / r_max;
}

ProbTriple ml_estimate(const CountVector &counts, const TrineConfig &config, double tol) {
    check_counts(counts);
    require(tol > 0.0, ErrorCode::InvalidArgument, "ml tolerance must be positive");
    const long N = counts.total();
    if (N == 0) {
        return center_probs();
    }
    long sq = 0;
    for (int k = 0; k < 3; ++k) {
        sq += static_cast<long>(counts[k]) * counts[k];
    }
    if (2 * sq <= N * N) {
        const double dN = static_cast<double>(N);
        return {{counts[0] / dN, counts[1] / dN, counts[2] / dN}};
    }

    // On the boundary, g(phi) = sum_k n_k ln(1 + cos(phi - phi_k)) is concave
    // between consecutive zeros phi_k + pi of the clicked outcomes, where
    // g' = -sum_k n_k tan((phi - phi_k)/2) runs from +inf to -inf.
    std::vector<double> cuts;
    for (int k = 0; k < 3; ++k) {
        if (counts[k] > 0) {
            double c = std::fmod(config.angle(k) + std::numbers::pi, kTwoPi);
            cuts.push_back(c < 0.0 ? c + kTwoPi : c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    auto slope = [&](double phi) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (counts[k] > 0) {
                s -= counts[k] * std::tan(0.5 * wrap(phi - config.angle(k)));
            }
        }
        return s;
    };
    auto value = [&](double phi) {
        double g = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (counts[k] > 0) {
                g += counts[k] * std::log1p(std::cos(phi - config.angle(k)));
            }
        }
        return g;
    };

    double best_phi = 0.0;
    double best_g = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        double lo = cuts[i];
        double hi = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + kTwoPi;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        double phi = std::fmod(0.5 * (lo + hi), kTwoPi);
        const double g = value(phi);
        const double margin = 1e-12 * std::max(1.0, std::abs(g));
        if (g > best_g + margin || (std::abs(g - best_g) <= margin && phi < best_phi)) {
            best_g = std::max(g, best_g);
            best_phi = phi;
        }
    }
    return probs_from_state(BlochState{1.0, best_phi}, config);
}

ProbTriple det_weight_mean_estimate(const CountVector &counts, double beta, MomentEngine &engine,
                                    EstimateDiagnostics *diag) {
    check_counts(counts);
    require(std::isfinite(beta) && beta > 0.0, ErrorCode::InvalidArgument,
            "det-weight estimate needs beta > 0");
    if (counts.total() == 0) {
        if (diag != nullptr) {
            *diag = {};
        }
        return center_probs();
    }
    const double base = engine.log_det_moment(beta, counts);
    ProbTriple raw;
    for (int k = 0; k < 3; ++k) {
        raw[k] = std::exp(engine.log_det_moment(beta, increment(counts, k)) - base);
    }
    return finish_ratios(raw, true, diag);
}

ProbTriple estimate(const EstimatorSpec &spec, const CountVector &counts, MomentEngine &engine,
                    EstimateDiagnostics *diag) {
    if (diag != nullptr) {
        *diag = {};
    }
    switch (spec.kind) {
    case EstimatorKind::MeanTrine:
        return mean_estimate(counts, spec.beta, engine, diag);
    case EstimatorKind::ClassicalMinimax:
        check_counts(counts);
        return classical_minimax_estimate(counts);
    case EstimatorKind::CorrectedMinimax:
        return corrected_minimax_estimate(counts, spec.lambda);
    case EstimatorKind::MlTrine:
        return ml_estimate(counts, TrineConfig{}, spec.ml_tol);
    case EstimatorKind::MeanDetWeight:
        return det_weight_mean_estimate(counts, spec.beta, engine, diag);
    }
    fail(ErrorCode::InvalidArgument, "unknown estimator kind");
}

EstimateTable build_estimate_table(int N, const EstimatorSpec &spec, MomentEngine &engine,
                                   int workers) {
    require(N >= 0, ErrorCode::InvalidArgument, "total count must be non-negative");
    validate(spec);
    if (spec.kind == EstimatorKind::MeanTrine) {
        engine.reserve(N + 1 + 3 * static_cast<int>(std::ceil(spec.beta)));
    }
    EstimateTable table;
    table.N = N;
    table.spec = spec;
    const auto counts = enumerate_counts(N);
    table.entries.resize(counts.size());
    std::vector<EstimateDiagnostics> diags(counts.size());
    parallel_for(counts.size(), workers, [&](std::size_t i) {
        table.entries[i] = estimate(spec, counts[i], engine, &diags[i]);
    });
    for (std::size_t i = 0; i < counts.size(); ++i) {
        table.clamped += diags[i].clamped ? 1 : 0;
        table.max_sum_deviation = std::max(table.max_sum_deviation, diags[i].sum_deviation);
        if (spec.kind != EstimatorKind::ClassicalMinimax && !is_physical(table.entries[i])) {
            std::ostringstream msg;
            msg << estimator_kind_name(spec.kind) << " produced an unphysical estimate at n=("
                << counts[i][0] << "," << counts[i][1] << "," << counts[i][2] << ")";
            fail(ErrorCode::Consistency, msg.str());
        }
    }
    return table;
}

EstimateTable constant_estimate_table(int N, const ProbTriple &probs) {
    require(N >= 0, ErrorCode::InvalidArgument, "total count must be non-negative");
    EstimateTable table;
    table.N = N;
    table.entries.assign(level_size(N), probs);
    return table;
}

} // namespace trine
