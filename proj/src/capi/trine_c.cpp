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

#include "trine/trine_c.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <random>
#include <span>
#include <string>

#include "trine/errors.hpp"
#include "trine/estimators.hpp"
#include "trine/minimax.hpp"
#include "trine/moment_engine.hpp"
#include "trine/moment_table.hpp"
#include "trine/parallel.hpp"
#include "trine/quadrature.hpp"
#include "trine/risk.hpp"
#include "trine/simulation.hpp"

struct trine_engine {
    explicit trine_engine(trine::QuadratureSpec q) : engine(std::move(q)) {}
    trine::MomentEngine engine;
};

struct trine_profile {
    trine::RiskProfile profile;
};

struct trine_search {
    trine::MinimaxResult result;
};

struct trine_sim {
    trine::SimResult result;
    double exact = 0.0;
};

namespace {

using trine::ErrorCode;
using trine::fail;
using trine::require;

thread_local std::string last_error;

trine_status status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return TRINE_E_INVALID_ARGUMENT;
    case ErrorCode::Range:
        return TRINE_E_RANGE;
    case ErrorCode::Convergence:
        return TRINE_E_CONVERGENCE;
    case ErrorCode::Capacity:
        return TRINE_E_CAPACITY;
    case ErrorCode::Consistency:
        return TRINE_E_CONSISTENCY;
    case ErrorCode::Io:
        return TRINE_E_IO;
    case ErrorCode::Unsupported:
        return TRINE_E_UNSUPPORTED;
    }
    return TRINE_E_INTERNAL;
}

template <class F>
trine_status guard(F &&body) {
    last_error.clear();
    try {
        body();
        return TRINE_OK;
    } catch (const trine::Error &e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return TRINE_E_CAPACITY;
    } catch (const std::exception &e) {
        last_error = e.what();
        return TRINE_E_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return TRINE_E_INTERNAL;
    }
}

void need(const void *p, const char *what) {
    require(p != nullptr, ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

trine::CountVector counts_of(const int counts[3]) {
    need(counts, "counts");
    trine::CountVector c{{counts[0], counts[1], counts[2]}};
    trine::check_counts(c);
    return c;
}

char *copy_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string rational_string(const mpq_class &q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

bool is_oracle(const trine_estimator_spec *spec) { return spec->kind == TRINE_ORACLE; }

trine::EstimatorSpec spec_of(const trine_estimator_spec *spec) {
    need(spec, "estimator spec");
    require(spec->kind >= TRINE_MEAN_TRINE && spec->kind <= TRINE_MEAN_DET_WEIGHT,
            ErrorCode::InvalidArgument, "estimator kind out of range");
    trine::EstimatorSpec s;
    s.kind = static_cast<trine::EstimatorKind>(spec->kind);
    s.beta = spec->beta;
    s.lambda = spec->lambda;
    s.ml_tol = spec->ml_tol;
    trine::validate(s);
    return s;
}

trine::GridSpec grid_of(const trine_grid *grid) {
    trine::GridSpec g;
    if (grid != nullptr) {
        g.radial = grid->radial;
        g.angular = grid->angular;
        g.refine_levels = grid->refine_levels;
        g.refine_factor = grid->refine_factor;
        g.refine_half_width = grid->refine_half_width;
        g.die_mode = grid->die_mode != 0;
        g.die_divisions = grid->die_divisions;
    }
    trine::validate(g);
    return g;
}

trine::EstimateTable table_for(trine_engine *engine, const trine_estimator_spec *spec, int N,
                               const trine::ProbTriple &truth, int workers) {
    need(spec, "estimator spec");
    if (is_oracle(spec)) {
        return trine::constant_estimate_table(N, truth);
    }
    need(engine, "engine");
    return trine::build_estimate_table(N, spec_of(spec), engine->engine, workers);
}

std::ofstream open_output(const char *path) {
    need(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
    }
    return out;
}

void close_output(std::ofstream &out, const char *path) {
    out.close();
    if (!out) {
        fail(ErrorCode::Io, std::string("failed writing '") + path + "'");
    }
}

void check_precision(int precision) {
    require(precision >= 1 && precision <= 17, ErrorCode::InvalidArgument,
            "precision must lie in [1, 17]");
}

} // namespace

extern "C" {

const char *trine_version(void) { return "1.0.0"; }

const char *trine_last_error(void) { return last_error.c_str(); }

const char *trine_status_name(int status) {
    switch (status) {
    case TRINE_OK:
        return "ok";
    case TRINE_E_INVALID_ARGUMENT:
        return "invalid-argument";
    case TRINE_E_RANGE:
        return "range";
    case TRINE_E_CONVERGENCE:
        return "convergence";
    case TRINE_E_CAPACITY:
        return "capacity";
    case TRINE_E_CONSISTENCY:
        return "consistency";
    case TRINE_E_IO:
        return "io";
    case TRINE_E_UNSUPPORTED:
        return "unsupported";
    default:
        return "internal";
    }
}

void trine_string_free(char *s) { std::free(s); }

trine_status trine_default_workers(int *out) {
    return guard([&] {
        need(out, "out");
        *out = trine::default_workers();
    });
}

trine_status trine_engine_create(double quad_tol, int quad_max_level, trine_engine **out) {
    return guard([&] {
        need(out, "out");
        trine::QuadratureSpec q;
        if (quad_tol > 0.0) q.rel_tol = quad_tol;
        if (quad_max_level > 0) q.max_level = quad_max_level;
        *out = new trine_engine(q);
    });
}

void trine_engine_destroy(trine_engine *engine) { delete engine; }

trine_status trine_log_moment(trine_engine *engine, double beta, const int counts[3], int path,
                              double *out) {
    return guard([&] {
        need(engine, "engine");
        need(out, "out");
        const trine::CountVector c = counts_of(counts);
        switch (path) {
        case TRINE_MOMENT_DEFAULT:
            *out = engine->engine.log_moment(beta, c);
            break;
        case TRINE_MOMENT_QUADRATURE:
            *out = trine::log_moment_quadrature(beta, c, trine::MomentWeight::PProduct,
                                                engine->engine.quadrature());
            break;
        case TRINE_MOMENT_DET_QUADRATURE:
            *out = engine->engine.log_det_moment(beta, c);
            break;
        default:
            fail(ErrorCode::InvalidArgument, "unknown moment path");
        }
    });
}

trine_status trine_moment(trine_engine *engine, double beta, const int counts[3], int path,
                          double *out) {
    double log_value = 0.0;
    const trine_status st = trine_log_moment(engine, beta, counts, path, &log_value);
    if (st == TRINE_OK) {
        *out = std::exp(log_value);
    }
    return st;
}

trine_status trine_moment_exact(int beta, const int counts[3], char **out) {
    return guard([&] {
        need(out, "out");
        const trine::CountVector c = counts_of(counts);
        require(beta >= 1, ErrorCode::InvalidArgument, "exact moments need an integer beta >= 1");
        const trine::MomentTable table = trine::MomentTable::build(c.total() + 3 * (beta - 1));
        *out = copy_string(rational_string(trine::moment_integer_beta(table, beta, c)));
    });
}

trine_status trine_surface_moment_exact(const int counts[3], char **out) {
    return guard([&] {
        need(out, "out");
        const trine::CountVector c = counts_of(counts);
        const trine::MomentTable table = trine::MomentTable::build(c.total());
        *out = copy_string(rational_string(table.L(c)));
    });
}

trine_status trine_special_closed_form(const char *kind, int n, char **out) {
    return guard([&] {
        need(kind, "kind");
        need(out, "out");
        *out = copy_string(rational_string(trine::special_closed_form(trine::parse_special_kind(kind), n)));
    });
}

trine_status trine_classical_moment(double beta, const int *counts, size_t K, double *out) {
    return guard([&] {
        need(counts, "counts");
        need(out, "out");
        *out = trine::classical_moment(beta, std::span<const int>(counts, K));
    });
}

trine_status trine_dump_table(int n_max, const char *path) {
    return guard([&] {
        const trine::MomentTable table = trine::MomentTable::build(n_max);
        std::ofstream out = open_output(path);
        table.dump(out);
        close_output(out, path);
    });
}

trine_status trine_verify_table(int n_max, size_t *checks, size_t *failures) {
    return guard([&] {
        need(checks, "checks");
        need(failures, "failures");
        const trine::MomentTable table = trine::MomentTable::build(n_max);
        const trine::StructureReport report = trine::verify_structure(table);
        *checks = report.sum_rule_checks + report.symmetry_checks + 1;
        *failures = report.sum_rule_failures + report.symmetry_failures + (report.anchors_ok ? 0 : 1);
        if (!report.first_failure.empty()) {
            last_error = report.first_failure;
        }
    });
}

void trine_estimator_spec_default(trine_estimator_spec *spec) {
    if (spec == nullptr) return;
    const trine::EstimatorSpec d;
    spec->kind = TRINE_MEAN_TRINE;
    spec->beta = d.beta;
    spec->lambda = d.lambda;
    spec->ml_tol = d.ml_tol;
}

trine_status trine_parse_kind(const char *name, int *kind) {
    return guard([&] {
        need(name, "name");
        need(kind, "kind");
        if (std::strcmp(name, "oracle") == 0) {
            *kind = TRINE_ORACLE;
            return;
        }
        *kind = static_cast<int>(trine::parse_estimator_kind(name));
    });
}

const char *trine_kind_name(int kind) {
    if (kind == TRINE_ORACLE) return "oracle";
    if (kind < TRINE_MEAN_TRINE || kind > TRINE_MEAN_DET_WEIGHT) return "unknown";
    return trine::estimator_kind_name(static_cast<trine::EstimatorKind>(kind));
}

trine_status trine_estimate(trine_engine *engine, const trine_estimator_spec *spec,
                            const int counts[3], double probs[3], int *clamped) {
    return guard([&] {
        need(engine, "engine");
        need(probs, "probs");
        const trine::CountVector c = counts_of(counts);
        trine::EstimateDiagnostics diag;
        const trine::ProbTriple p = trine::estimate(spec_of(spec), c, engine->engine, &diag);
        for (int k = 0; k < 3; ++k) probs[k] = p[k];
        if (clamped != nullptr) *clamped = diag.clamped ? 1 : 0;
    });
}

trine_status trine_lambda_min(int N, double *out) {
    return guard([&] {
        need(out, "out");
        *out = trine::lambda_min(N);
    });
}

trine_status trine_probs_from_state(double r, double phi, double probs[3]) {
    return guard([&] {
        need(probs, "probs");
        require(r >= 0.0 && r <= 1.0 && std::isfinite(phi), ErrorCode::InvalidArgument,
                "state must have 0 <= r <= 1");
        const trine::ProbTriple p = trine::probs_from_state(trine::BlochState{r, phi});
        for (int k = 0; k < 3; ++k) probs[k] = p[k];
    });
}

trine_status trine_state_from_probs(const double probs[3], double *r, double *phi) {
    return guard([&] {
        need(probs, "probs");
        need(r, "r");
        need(phi, "phi");
        const trine::BlochState s = trine::state_from_probs({{probs[0], probs[1], probs[2]}});
        *r = s.r;
        *phi = s.phi;
    });
}

void trine_grid_default(trine_grid *grid) {
    if (grid == nullptr) return;
    const trine::GridSpec d;
    grid->radial = d.radial;
    grid->angular = d.angular;
    grid->refine_levels = d.refine_levels;
    grid->refine_factor = d.refine_factor;
    grid->refine_half_width = d.refine_half_width;
    grid->die_mode = d.die_mode ? 1 : 0;
    grid->die_divisions = d.die_divisions;
}

trine_status trine_mse_at_probs(trine_engine *engine, const trine_estimator_spec *spec, int N,
                                const double probs[3], double *out) {
    return guard([&] {
        need(probs, "probs");
        need(out, "out");
        const trine::ProbTriple p{{probs[0], probs[1], probs[2]}};
        const trine::EstimateTable table = table_for(engine, spec, N, p, 0);
        *out = trine::mse_at_probs(p, table);
    });
}

trine_status trine_mse_at_state(trine_engine *engine, const trine_estimator_spec *spec, int N,
                                double r, double phi, double *out) {
    double probs[3];
    const trine_status st = trine_probs_from_state(r, phi, probs);
    if (st != TRINE_OK) return st;
    return trine_mse_at_probs(engine, spec, N, probs, out);
}

trine_status trine_classical_mse_closed_form(double beta, double p_sq, int N, int K, double *out) {
    return guard([&] {
        need(out, "out");
        *out = trine::classical_mse_closed_form(beta, p_sq, N, K);
    });
}

trine_status trine_profile_create(trine_engine *engine, const trine_estimator_spec *spec, int N,
                                  const trine_grid *grid, int workers, trine_profile **out) {
    return guard([&] {
        need(spec, "estimator spec");
        need(out, "out");
        require(N >= 0, ErrorCode::InvalidArgument, "total count must be non-negative");
        const trine::GridSpec g = grid_of(grid);
        auto holder = std::make_unique<trine_profile>();
        if (is_oracle(spec)) {
            holder->profile = trine::oracle_profile(g, N, workers);
        } else {
            need(engine, "engine");
            holder->profile = trine::mse_profile(g, N, spec_of(spec), engine->engine, workers);
        }
        *out = holder.release();
    });
}

void trine_profile_destroy(trine_profile *profile) { delete profile; }

trine_status trine_profile_get_summary(const trine_profile *profile, trine_profile_summary *out) {
    return guard([&] {
        need(profile, "profile");
        need(out, "out");
        const trine::RiskProfile &p = profile->profile;
        out->N = p.N;
        out->parameter = p.parameter;
        out->max_mse = p.max.mse;
        out->argmax_r = p.max.state.r;
        out->argmax_phi = p.max.state.phi;
        out->min_mse = p.min.mse;
        out->argmin_r = p.min.state.r;
        out->argmin_phi = p.min.state.phi;
        for (int k = 0; k < 3; ++k) {
            out->argmax_p[k] = p.max.probs[k];
            out->argmin_p[k] = p.min.probs[k];
        }
        out->coarse_max = p.coarse_max;
        out->coarse_min = p.coarse_min;
        out->nodes = p.nodes.size();
        out->evaluations = p.evaluations;
    });
}

const char *trine_profile_estimator(const trine_profile *profile) {
    return profile == nullptr ? "" : profile->profile.estimator.c_str();
}

trine_status trine_profile_node(const trine_profile *profile, size_t i, double *r, double *phi,
                                double probs[3], double *mse) {
    return guard([&] {
        need(profile, "profile");
        require(i < profile->profile.nodes.size(), ErrorCode::Range, "profile node index out of range");
        const trine::RiskNode &n = profile->profile.nodes[i];
        if (r != nullptr) *r = n.state.r;
        if (phi != nullptr) *phi = n.state.phi;
        if (probs != nullptr) {
            for (int k = 0; k < 3; ++k) probs[k] = n.probs[k];
        }
        if (mse != nullptr) *mse = n.mse;
    });
}

trine_status trine_profile_write_csv(const trine_profile *profile, const char *path, int precision) {
    return guard([&] {
        need(profile, "profile");
        check_precision(precision);
        std::ofstream out = open_output(path);
        trine::write_profile_csv(out, profile->profile, precision);
        close_output(out, path);
    });
}

trine_status trine_optimal_beta(trine_engine *engine, int N, double beta_lo, double beta_hi,
                                const trine_grid *grid, double tol, int workers,
                                trine_search **out) {
    return guard([&] {
        need(engine, "engine");
        need(out, "out");
        auto holder = std::make_unique<trine_search>();
        holder->result = trine::optimal_beta(N, engine->engine, grid_of(grid), tol > 0.0 ? tol : 1e-4,
                                             beta_lo, beta_hi, workers);
        *out = holder.release();
    });
}

trine_status trine_optimal_lambda(int N, const trine_grid *grid, double tol, int workers,
                                  trine_search **out) {
    return guard([&] {
        need(out, "out");
        auto holder = std::make_unique<trine_search>();
        holder->result = trine::optimal_lambda(N, grid_of(grid), tol > 0.0 ? tol : 1e-4, workers);
        *out = holder.release();
    });
}

void trine_search_destroy(trine_search *search) { delete search; }

trine_status trine_search_get_summary(const trine_search *search, trine_search_summary *out) {
    return guard([&] {
        need(search, "search");
        need(out, "out");
        const trine::MinimaxResult &r = search->result;
        out->N = r.N;
        out->kind = static_cast<int>(r.kind);
        out->optimum = r.optimum;
        out->value = r.value;
        out->min_mse = r.min_mse;
        out->argmax_r = r.argmax.r;
        out->argmax_phi = r.argmax.phi;
        out->argmin_r = r.argmin.r;
        out->argmin_phi = r.argmin.phi;
        out->flat_low = r.flat_low;
        out->flat_high = r.flat_high;
        out->samples = r.samples.size();
        out->golden_iterations = r.golden_iterations;
        out->local_minima = r.local_minima;
        out->converged = r.converged ? 1 : 0;
        out->at_lower_edge = r.at_lower_edge ? 1 : 0;
    });
}

trine_status trine_search_sample(const trine_search *search, size_t i, double *parameter,
                                 double *max_mse, double *min_mse) {
    return guard([&] {
        need(search, "search");
        require(i < search->result.samples.size(), ErrorCode::Range, "sample index out of range");
        const trine::MinimaxSample &s = search->result.samples[i];
        if (parameter != nullptr) *parameter = s.parameter;
        if (max_mse != nullptr) *max_mse = s.max_mse;
        if (min_mse != nullptr) *min_mse = s.min_mse;
    });
}

trine_status trine_sim_run(trine_engine *engine, const trine_estimator_spec *spec,
                           const trine_sim_config *config, trine_sim **out) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        trine::SimConfig c;
        c.state = trine::BlochState{config->r, config->phi};
        c.N = config->N;
        c.trials = config->trials;
        c.seed = config->seed;
        c.workers = config->workers;
        c.keep_trials = config->keep_trials != 0;
        trine::validate(c);
        const trine::ProbTriple truth = trine::probs_from_state(c.state);
        const trine::EstimateTable table = table_for(engine, spec, c.N, truth, c.workers);
        auto holder = std::make_unique<trine_sim>();
        holder->result = trine::empirical_mse(c, table);
        holder->exact = trine::mse_at_probs(truth, table);
        *out = holder.release();
    });
}

void trine_sim_destroy(trine_sim *sim) { delete sim; }

trine_status trine_sim_get_summary(const trine_sim *sim, trine_sim_summary *out) {
    return guard([&] {
        need(sim, "sim");
        need(out, "out");
        out->mean = sim->result.mean;
        out->std_error = sim->result.std_error;
        out->exact_mse = sim->exact;
        out->trials = sim->result.trials;
    });
}

trine_status trine_sim_write_csv(const trine_sim *sim, const char *path, int precision) {
    return guard([&] {
        need(sim, "sim");
        check_precision(precision);
        require(!sim->result.records.empty(), ErrorCode::InvalidArgument,
                "simulation was run without keep_trials");
        std::ofstream out = open_output(path);
        trine::write_trials_csv(out, sim->result, precision);
        close_output(out, path);
    });
}

trine_status trine_sample_counts(const double probs[3], int N, uint64_t seed, int counts[3]) {
    return guard([&] {
        need(probs, "probs");
        need(counts, "counts");
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                          static_cast<std::uint32_t>(seed >> 32), 0u};
        std::mt19937_64 rng(seq);
        const trine::CountVector c = trine::sample_counts({{probs[0], probs[1], probs[2]}}, N, rng);
        for (int k = 0; k < 3; ++k) counts[k] = c[k];
    });
}

} // extern "C"
