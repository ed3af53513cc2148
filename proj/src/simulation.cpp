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

#include "trine/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "trine/errors.hpp"
#include "trine/parallel.hpp"
#include "trine/risk.hpp"

namespace trine {

namespace {

int draw_binomial(int trials, double p, std::mt19937_64 &rng) {
    if (trials == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    std::binomial_distribution<int> dist(trials, p);
    return dist(rng);
}

// Running mean and centred second moment (Welford), merged pairwise.
struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    void merge(const Moments &o) {
        if (o.n == 0) return;
        const std::int64_t total = n + o.n;
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / static_cast<double>(total);
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(total);
        n = total;
    }
};

} // namespace

CountVector sample_counts(const ProbTriple &probs, int N, std::mt19937_64 &rng) {
    require(N >= 0, ErrorCode::InvalidArgument, "sample size must be non-negative");
    const double p1 = std::clamp(probs[0], 0.0, 1.0);
    const double p2 = std::clamp(probs[1], 0.0, 1.0);
    const int n1 = draw_binomial(N, p1, rng);
    const double rest = 1.0 - p1;
    const int n2 = rest > 0.0 ? draw_binomial(N - n1, std::min(1.0, p2 / rest), rng) : 0;
    return CountVector{{n1, n2, N - n1 - n2}};
}

void validate(const SimConfig &config) {
    require(config.N >= 1, ErrorCode::InvalidArgument, "simulation needs N >= 1");
    require(config.trials >= 1, ErrorCode::InvalidArgument, "simulation needs at least one trial");
    require(config.state.r >= 0.0 && config.state.r <= 1.0 && std::isfinite(config.state.phi),
            ErrorCode::InvalidArgument, "simulated state must have 0 <= r <= 1");
}

SimResult empirical_mse(const SimConfig &config, const EstimateTable &table) {
    validate(config);
    require(table.N == config.N, ErrorCode::InvalidArgument,
            "estimate table total does not match the simulated N");
    const ProbTriple p = probs_from_state(config.state);
    const std::int64_t blocks = (config.trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Moments> parts(static_cast<std::size_t>(blocks));
    SimResult out;
    out.trials = config.trials;
    if (config.keep_trials) {
        out.records.resize(static_cast<std::size_t>(config.trials));
    }
    const auto seed_lo = static_cast<std::uint32_t>(config.seed & 0xffffffffu);
    const auto seed_hi = static_cast<std::uint32_t>(config.seed >> 32);

    parallel_for(static_cast<std::size_t>(blocks), config.workers, [&](std::size_t b) {
        std::seed_seq seq{seed_lo, seed_hi, static_cast<std::uint32_t>(b)};
        std::mt19937_64 rng(seq);
        const std::int64_t begin = static_cast<std::int64_t>(b) * kTrialBlock;
        const std::int64_t end = std::min(config.trials, begin + kTrialBlock);
        Moments &m = parts[b];
        for (std::int64_t t = begin; t < end; ++t) {
            const CountVector n = sample_counts(p, config.N, rng);
            const double loss = squared_distance(p, table(n));
            m.add(loss);
            if (config.keep_trials) {
                out.records[static_cast<std::size_t>(t)] = TrialRecord{n, loss};
            }
        }
    });

    Moments all;
    for (const Moments &m : parts) {
        all.merge(m);
    }
    out.mean = all.mean;
    out.std_error = all.n > 1 ? std::sqrt(all.m2 / static_cast<double>(all.n - 1) / static_cast<double>(all.n))
                              : std::numeric_limits<double>::quiet_NaN();
    return out;
}

void write_trials_csv(std::ostream &out, const SimResult &result, int precision) {
    out << "# trine-simulation-trials v1\n";
    out << "trial,n1,n2,n3,squared_error\n";
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const TrialRecord &r = result.records[i];
        out << i << "," << r.counts[0] << "," << r.counts[1] << "," << r.counts[2] << ","
            << format_number(r.loss, precision) << "\n";
    }
}

} // namespace trine
