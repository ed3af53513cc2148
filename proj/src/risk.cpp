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

#include "trine/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "trine/errors.hpp"
#include "trine/parallel.hpp"

namespace trine {

namespace {

constexpr double kLogCutoff = -46.0;
constexpr double kWedge = std::numbers::pi / 3.0;

double log_binomial(const LogFactorials &lf, int m, int k) { return lf(m) - lf(k) - lf(m - k); }

// Binomial(m, q) terms around the mode, largest first outwards; calls
// visit(k, weight) for every term above the cutoff.
template <class Visit>
void walk_binomial(const LogFactorials &lf, int m, double q, Visit &&visit) {
    if (q <= 0.0) {
        visit(0, 1.0);
        return;
    }
    if (q >= 1.0) {
        visit(m, 1.0);
        return;
    }
    const int mode = std::clamp(static_cast<int>(std::floor((m + 1) * q)), 0, m);
    const double log_q = std::log(q);
    const double log_1q = std::log1p(-q);
    const double c0 = std::exp(log_binomial(lf, m, mode) + mode * log_q + (m - mode) * log_1q);
    const double floor_weight = c0 * std::exp(kLogCutoff);
    const double rho = q / (1.0 - q);
    visit(mode, c0);
    double c = c0;
    for (int k = mode; k < m; ++k) {
        c *= static_cast<double>(m - k) / static_cast<double>(k + 1) * rho;
        if (c < floor_weight) {
            break;
        }
        visit(k + 1, c);
    }
    c = c0;
    for (int k = mode; k > 0; --k) {
        c *= static_cast<double>(k) / (static_cast<double>(m - k + 1) * rho);
        if (c < floor_weight) {
            break;
        }
        visit(k - 1, c);
    }
}

const LogFactorials &log_factorials(int N) {
    thread_local LogFactorials lf;
    if (lf.size() <= N) {
        lf.ensure(N);
    }
    return lf;
}

ProbTriple sanitize(const ProbTriple &probs) {
    ProbTriple p;
    for (int k = 0; k < 3; ++k) {
        p[k] = std::clamp(probs[k], 0.0, 1.0);
    }
    return p;
}

} // namespace

double mse_at_probs(const ProbTriple &probs, const EstimateTable &table, Loss loss,
                    double *weight_sum) {
    const int N = table.N;
    require(table.entries.size() == level_size(N), ErrorCode::InvalidArgument,
            "estimate table does not cover its total");
    const ProbTriple p = sanitize(probs);
    const LogFactorials &lf = log_factorials(N);
    const double rest = p[1] + p[2];
    const double q = rest > 0.0 ? p[1] / rest : 0.0;

    auto term_loss = [&](const ProbTriple &est) {
        if (loss == Loss::HilbertSchmidt) {
            return hilbert_schmidt_sq(p, est);
        }
        const double d0 = p[0] - est[0];
        const double d1 = p[1] - est[1];
        const double d2 = p[2] - est[2];
        return d0 * d0 + d1 * d1 + d2 * d2;
    };

    double total = 0.0;
    double weights = 0.0;
    auto row = [&](int n1, double w1) {
        const int m = N - n1;
        const std::size_t base = count_index(CountVector{{n1, 0, m}});
        double acc = 0.0;
        double acc_w = 0.0;
        walk_binomial(lf, m, q, [&](int n2, double c) {
            acc += c * term_loss(table.entries[base + static_cast<std::size_t>(n2)]);
            acc_w += c;
        });
        total += w1 * acc;
        weights += w1 * acc_w;
    };
    walk_binomial(lf, N, p[0], row);
    if (weight_sum != nullptr) {
        *weight_sum = weights;
    }
    return total;
}

double mse_at_state(const BlochState &state, const EstimateTable &table) {
    return mse_at_probs(probs_from_state(state), table);
}

double classical_mse_closed_form(double beta, double p_sq, int N, int K) {
    require(beta > 0.0, ErrorCode::InvalidArgument, "closed-form MSE needs beta > 0");
    require(N >= 0 && K >= 1, ErrorCode::InvalidArgument, "closed-form MSE needs N >= 0, K >= 1");
    const double b2 = beta * beta;
    const double denom = N + K * beta;
    return ((b2 * K * K - N) * p_sq + (N - b2 * K)) / (denom * denom);
}

void validate(const GridSpec &grid) {
    require(grid.radial >= 2 && grid.angular >= 2, ErrorCode::InvalidArgument,
            "grid needs at least 2 radial and 2 angular nodes");
    require(grid.refine_levels >= 0 && grid.refine_levels <= 6, ErrorCode::InvalidArgument,
            "refinement levels must lie in [0, 6]");
    require(grid.refine_factor >= 2 && grid.refine_half_width >= 1, ErrorCode::InvalidArgument,
            "refinement needs factor >= 2 and half width >= 1");
    require(grid.die_divisions >= 1, ErrorCode::InvalidArgument, "die lattice needs divisions >= 1");
}

RiskProfile profile_with(const GridSpec &grid, int N, const std::string &label, double parameter,
                         const std::function<double(const ProbTriple &)> &mse, int workers) {
    validate(grid);
    RiskProfile out;
    out.N = N;
    out.estimator = label;
    out.parameter = parameter;
    out.grid = grid;

    auto evaluate = [&](std::vector<RiskNode> &nodes) {
        parallel_for(nodes.size(), workers, [&](std::size_t i) { nodes[i].mse = mse(nodes[i].probs); });
        out.evaluations += nodes.size();
    };
    auto disk_node = [](double r, double phi) {
        RiskNode n;
        n.state = BlochState{r, phi};
        n.probs = probs_from_state(n.state);
        return n;
    };

    if (grid.die_mode) {
        const int D = grid.die_divisions;
        for (int i = 0; i <= D; ++i) {
            for (int j = 0; i + j <= D; ++j) {
                RiskNode n;
                n.probs = {{static_cast<double>(i) / D, static_cast<double>(j) / D,
                            static_cast<double>(D - i - j) / D}};
                n.state = state_from_probs(n.probs);
                out.nodes.push_back(n);
            }
        }
    } else {
        out.nodes.push_back(disk_node(0.0, 0.0));
        for (int i = 1; i < grid.radial; ++i) {
            const double r = i == grid.radial - 1 ? 1.0 : static_cast<double>(i) / (grid.radial - 1);
            for (int j = 0; j < grid.angular; ++j) {
                const double phi =
                    j == grid.angular - 1 ? kWedge : kWedge * j / (grid.angular - 1);
                out.nodes.push_back(disk_node(r, phi));
            }
        }
    }
    evaluate(out.nodes);

    std::size_t imax = 0;
    std::size_t imin = 0;
    for (std::size_t i = 1; i < out.nodes.size(); ++i) {
        if (out.nodes[i].mse > out.nodes[imax].mse) imax = i;
        if (out.nodes[i].mse < out.nodes[imin].mse) imin = i;
    }
    out.max = out.nodes[imax];
    out.min = out.nodes[imin];
    out.coarse_max = out.max.mse;
    out.coarse_min = out.min.mse;
    if (grid.die_mode) {
        return out;
    }

    auto refine = [&](RiskNode best, bool maximise) {
        double dr = 1.0 / (grid.radial - 1);
        double dphi = kWedge / (grid.angular - 1);
        const int h = grid.refine_half_width;
        for (int level = 0; level < grid.refine_levels; ++level) {
            dr /= grid.refine_factor;
            dphi /= grid.refine_factor;
            std::vector<RiskNode> patch;
            for (int i = -h; i <= h; ++i) {
                const double r = best.state.r + i * dr;
                if (r < 0.0 || r > 1.0) continue;
                for (int j = -h; j <= h; ++j) {
                    const double phi = best.state.phi + j * dphi;
                    if (phi < 0.0 || phi > kWedge) continue;
                    if (r == 0.0 && j != 0) continue;
                    patch.push_back(disk_node(r, phi));
                }
            }
            evaluate(patch);
            for (const RiskNode &n : patch) {
                if (maximise ? n.mse > best.mse : n.mse < best.mse) {
                    best = n;
                }
            }
        }
        return best;
    };
    out.max = refine(out.max, true);
    out.min = refine(out.min, false);
    return out;
}

RiskProfile mse_profile(const GridSpec &grid, const EstimateTable &table, int workers) {
    return profile_with(
        grid, table.N, estimator_kind_name(table.spec.kind), table.spec.parameter(),
        [&](const ProbTriple &p) { return mse_at_probs(p, table); }, workers);
}

RiskProfile mse_profile(const GridSpec &grid, int N, const EstimatorSpec &spec,
                        MomentEngine &engine, int workers) {
    const EstimateTable table = build_estimate_table(N, spec, engine, workers);
    return mse_profile(grid, table, workers);
}

RiskProfile oracle_profile(const GridSpec &grid, int N, int workers) {
    require(N <= 400, ErrorCode::InvalidArgument, "oracle profiles are limited to N <= 400");
    return profile_with(
        grid, N, "oracle", 0.0,
        [N](const ProbTriple &p) { return mse_at_probs(p, constant_estimate_table(N, p)); },
        workers);
}

std::string format_number(double value, int precision) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (value == 0.0) {
        value = 0.0; // drops the sign of -0
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

void write_profile_csv(std::ostream &out, const RiskProfile &profile, int precision) {
    out << "# trine-risk-profile v1\n";
    if (profile.grid.die_mode) {
        out << "N,estimator,beta_or_lambda,p1,p2,p3,mse\n";
    } else {
        out << "N,estimator,beta_or_lambda,r,phi,mse\n";
    }
    const std::string prefix = std::to_string(profile.N) + "," + profile.estimator + "," +
                               format_number(profile.parameter, precision) + ",";
    for (const RiskNode &n : profile.nodes) {
        out << prefix;
        if (profile.grid.die_mode) {
            out << format_number(n.probs[0], precision) << "," << format_number(n.probs[1], precision)
                << "," << format_number(n.probs[2], precision);
        } else {
            out << format_number(n.state.r, precision) << "," << format_number(n.state.phi, precision);
        }
        out << "," << format_number(n.mse, precision) << "\n";
    }
}

} // namespace trine
