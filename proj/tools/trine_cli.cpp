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

// Command-line front end over the C interface of libtrine. Data goes to
// standard output or files, diagnostics to standard error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trine/trine_c.h"

namespace {

using nlohmann::ordered_json;

// A failed library call, carrying its status and message.
struct Failure : std::runtime_error {
    explicit Failure(const std::string &m) : std::runtime_error(m) {}
};

void check(trine_status st, const char *what) {
    if (st != TRINE_OK) {
        throw Failure(std::string(what) + ": " + trine_status_name(st) + ": " + trine_last_error());
    }
}

struct Engine {
    trine_engine *ptr = nullptr;
    Engine(double tol, int max_level) { check(trine_engine_create(tol, max_level, &ptr), "engine"); }
    ~Engine() { trine_engine_destroy(ptr); }
};

struct Globals {
    int precision = 9;
    int workers = 0;
    double quad_tol = 1e-10;
    int quad_max_level = 9;
};

std::string num(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

// Flat JSON object. Numbers are written with the same %g rounding as the
// text outputs (the library serializer can print 17 digits where 9 were
// asked for); strings go through nlohmann for escaping.
class FlatJson {
  public:
    void set(const std::string &key, const std::string &value) { add(key, ordered_json(value).dump()); }
    void set(const std::string &key, const char *value) { set(key, std::string(value)); }
    void set(const std::string &key, double value, int precision) {
        add(key, std::isfinite(value) ? num(value, precision) : "null");
    }
    void set(const std::string &key, long long value) { add(key, std::to_string(value)); }
    void set(const std::string &key, bool value) { add(key, value ? "true" : "false"); }
    std::string dump(bool pretty = false) const {
        std::string out = "{";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            out += i ? "," : "";
            out += pretty ? "\n  " : "";
            out += ordered_json(fields_[i].first).dump() + (pretty ? ": " : ":") + fields_[i].second;
        }
        return out + (pretty ? "\n}" : "}");
    }

  private:
    void add(const std::string &key, std::string token) { fields_.emplace_back(key, std::move(token)); }
    std::vector<std::pair<std::string, std::string>> fields_;
};

struct EstimatorFlags {
    std::string kind = "mean";
    double beta = 1.0;
    double lambda = 0.0;
    bool oracle = false;

    trine_estimator_spec spec() const {
        trine_estimator_spec s;
        trine_estimator_spec_default(&s);
        int k = 0;
        check(trine_parse_kind(oracle ? "oracle" : kind.c_str(), &k), "estimator");
        s.kind = k;
        s.beta = beta;
        s.lambda = lambda;
        return s;
    }
};

void add_estimator_flags(CLI::App *cmd, EstimatorFlags &f) {
    cmd->add_option("--kind", f.kind, "mean, classical, corrected, ml, det or oracle")
        ->capture_default_str();
    cmd->add_option("--beta", f.beta, "weight exponent of the mean estimators")->capture_default_str();
    cmd->add_option("--lambda", f.lambda, "admixture of the corrected estimator")->capture_default_str();
}

struct GridFlags {
    trine_grid grid{};
    GridFlags() { trine_grid_default(&grid); }
};

void add_grid_flags(CLI::App *cmd, GridFlags &g) {
    cmd->add_option("--radial", g.grid.radial, "radial grid nodes")->capture_default_str();
    cmd->add_option("--angular", g.grid.angular, "angular grid nodes on [0, pi/3]")->capture_default_str();
    cmd->add_option("--refine-levels", g.grid.refine_levels, "refinement passes")->capture_default_str();
    cmd->add_option("--refine-factor", g.grid.refine_factor, "spacing shrink per pass")->capture_default_str();
    cmd->add_option("--refine-half-width", g.grid.refine_half_width, "nodes either side per pass")
        ->capture_default_str();
    cmd->add_option("--die-divisions", g.grid.die_divisions, "die-mode lattice divisions")
        ->capture_default_str();
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw Failure("failed writing '" + path + "'");
}

std::string rational_decimal(const std::string &q, int precision) {
    const auto slash = q.find('/');
    // Both parts may exceed double range; long double division of the leading
    // digits keeps the value within printing accuracy.
    const std::string a = q.substr(0, slash);
    const std::string b = q.substr(slash + 1);
    auto lead = [](const std::string &s, long &exp10) {
        const std::size_t keep = std::min<std::size_t>(s.size(), 30);
        exp10 = static_cast<long>(s.size() - keep);
        return std::stold(s.substr(0, keep));
    };
    long ea = 0;
    long eb = 0;
    const long double v = lead(a, ea) / lead(b, eb) * std::pow(10.0L, static_cast<long double>(ea - eb));
    return num(static_cast<double>(v), precision);
}

// --- commands --------------------------------------------------------------

struct MomentCmd {
    double beta = 1.0;
    std::vector<int> n{0, 0, 0};
    bool exact = false;
    bool quadrature = false;
    bool det = false;
    bool log = false;

    void run(const Globals &g) const {
        if (exact) {
            if (quadrature || det) throw Failure("--exact cannot be combined with --quadrature or --det");
            if (beta < 1.0 || beta != std::floor(beta)) throw Failure("--exact needs an integer beta >= 1");
            char *s = nullptr;
            check(trine_moment_exact(static_cast<int>(beta), n.data(), &s), "moment");
            const std::string q = s;
            trine_string_free(s);
            std::cout << q << " " << rational_decimal(q, g.precision) << "\n";
            return;
        }
        Engine e(g.quad_tol, g.quad_max_level);
        const int path = det ? TRINE_MOMENT_DET_QUADRATURE
                             : (quadrature ? TRINE_MOMENT_QUADRATURE : TRINE_MOMENT_DEFAULT);
        double v = 0.0;
        check(trine_log_moment(e.ptr, beta, n.data(), path, &v), "moment");
        std::cout << num(log ? v : std::exp(v), g.precision) << "\n";
    }
};

struct EstimateCmd {
    EstimatorFlags est;
    std::vector<int> n{0, 0, 0};

    void run(const Globals &g) const {
        Engine e(g.quad_tol, g.quad_max_level);
        const trine_estimator_spec spec = est.spec();
        if (spec.kind == TRINE_ORACLE) throw Failure("the oracle has no data-driven estimate");
        double p[3];
        int clamped = 0;
        check(trine_estimate(e.ptr, &spec, n.data(), p, &clamped), "estimate");
        double r = 0.0;
        double phi = 0.0;
        check(trine_state_from_probs(p, &r, &phi), "estimate");
        std::cout << num(p[0], g.precision) << " " << num(p[1], g.precision) << " "
                  << num(p[2], g.precision) << "\n";
        const double purity = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        std::cout << (purity > 0.5 + 1e-9 ? "UNPHYSICAL " : "") << "r=" << num(r, 4)
                  << " phi=" << num(phi, g.precision) << (clamped ? " clamped" : "") << "\n";
    }
};

FlatJson profile_json(const trine_profile *p, const Globals &g) {
    trine_profile_summary s;
    check(trine_profile_get_summary(p, &s), "risk");
    FlatJson j;
    j.set("format", "trine-risk-summary v1");
    j.set("N", static_cast<long long>(s.N));
    j.set("estimator", trine_profile_estimator(p));
    j.set("beta_or_lambda", s.parameter, g.precision);
    j.set("max", s.max_mse, g.precision);
    j.set("argmax_r", s.argmax_r, g.precision);
    j.set("argmax_phi", s.argmax_phi, g.precision);
    j.set("min", s.min_mse, g.precision);
    j.set("argmin_r", s.argmin_r, g.precision);
    j.set("argmin_phi", s.argmin_phi, g.precision);
    j.set("coarse_max", s.coarse_max, g.precision);
    j.set("coarse_min", s.coarse_min, g.precision);
    j.set("nodes", static_cast<long long>(s.nodes));
    return j;
}

struct RiskCmd {
    EstimatorFlags est;
    GridFlags grid;
    int N = 1;
    bool die_mode = false;
    std::string csv;
    std::string json;

    void run(const Globals &g) {
        Engine e(g.quad_tol, g.quad_max_level);
        grid.grid.die_mode = die_mode ? 1 : 0;
        const trine_estimator_spec spec = est.spec();
        trine_profile *p = nullptr;
        check(trine_profile_create(e.ptr, &spec, N, &grid.grid, g.workers, &p), "risk");
        try {
            if (!csv.empty()) check(trine_profile_write_csv(p, csv.c_str(), g.precision), "risk");
            const FlatJson j = profile_json(p, g);
            if (!json.empty()) write_text(json, j.dump(true) + "\n");
            std::cout << j.dump() << "\n";
        } catch (...) {
            trine_profile_destroy(p);
            throw;
        }
        trine_profile_destroy(p);
    }
};

struct Search {
    trine_search *ptr = nullptr;
    ~Search() { trine_search_destroy(ptr); }
    trine_search_summary summary() const {
        trine_search_summary s;
        check(trine_search_get_summary(ptr, &s), "minimax");
        return s;
    }
};

void run_search(Search &s, Engine &e, const std::string &param, int N, const trine_grid &grid,
                double tol, double lo, double hi, const Globals &g) {
    if (param == "beta") {
        check(trine_optimal_beta(e.ptr, N, lo, hi, &grid, tol, g.workers, &s.ptr), "minimax");
    } else if (param == "lambda") {
        check(trine_optimal_lambda(N, &grid, tol, g.workers, &s.ptr), "minimax");
    } else {
        throw Failure("--param must be beta or lambda");
    }
}

struct MinimaxCmd {
    GridFlags grid;
    std::string param = "beta";
    int N = 100;
    double tol = 1e-4;
    double beta_lo = 0.0;
    double beta_hi = -1.0;
    std::string csv;
    std::string json;

    void run(const Globals &g) {
        Engine e(g.quad_tol, g.quad_max_level);
        Search s;
        run_search(s, e, param, N, grid.grid, tol, beta_lo, beta_hi, g);
        const trine_search_summary sum = s.summary();
        FlatJson j;
        j.set("format", "trine-minimax-summary v1");
        j.set("N", static_cast<long long>(sum.N));
        j.set("estimator", trine_kind_name(sum.kind));
        j.set("parameter", param);
        j.set("optimum", sum.optimum, g.precision);
        j.set("minimax_mse", sum.value, g.precision);
        j.set("min_mse", sum.min_mse, g.precision);
        j.set("argmax_r", sum.argmax_r, g.precision);
        j.set("argmax_phi", sum.argmax_phi, g.precision);
        j.set("flat_low", sum.flat_low, g.precision);
        j.set("flat_high", sum.flat_high, g.precision);
        j.set("samples", static_cast<long long>(sum.samples));
        j.set("golden_iterations", static_cast<long long>(sum.golden_iterations));
        j.set("converged", sum.converged != 0);
        j.set("at_lower_edge", sum.at_lower_edge != 0);
        if (!csv.empty()) {
            std::ostringstream os;
            os << "# trine-minimax-samples v1\n" << param << ",max_mse,min_mse\n";
            for (std::size_t i = 0; i < sum.samples; ++i) {
                double t = 0.0, mx = 0.0, mn = 0.0;
                check(trine_search_sample(s.ptr, i, &t, &mx, &mn), "minimax");
                os << num(t, g.precision) << "," << num(mx, g.precision) << "," << num(mn, g.precision) << "\n";
            }
            write_text(csv, os.str());
        }
        if (!json.empty()) write_text(json, j.dump(true) + "\n");
        std::cout << j.dump() << "\n";
    }
};

struct Figure2Cmd {
    GridFlags grid;
    std::vector<int> Ns{30, 50, 100, 200, 300};
    double tol = 1e-4;
    std::string out;

    void run(const Globals &g) {
        Engine e(g.quad_tol, g.quad_max_level);
        std::ostringstream os;
        os << "# trine-figure2 v1\n";
        os << "N,beta_opt,beta_classical,minimax_mse,flat_low,flat_high\n";
        for (int N : Ns) {
            Search s;
            run_search(s, e, "beta", N, grid.grid, tol, 0.0, -1.0, g);
            const trine_search_summary sum = s.summary();
            os << N << "," << num(sum.optimum, g.precision) << ","
               << num(std::sqrt(static_cast<double>(N)) / 3.0, g.precision) << ","
               << num(sum.value, g.precision) << "," << num(sum.flat_low, g.precision) << ","
               << num(sum.flat_high, g.precision) << "\n";
        }
        if (out.empty()) {
            std::cout << os.str();
        } else {
            write_text(out, os.str());
        }
    }
};

struct Figure3Cmd {
    GridFlags grid;
    std::vector<int> Ns{30, 100, 300};
    double tol = 1e-4;
    std::string out;

    void run(const Globals &g) {
        Engine e(g.quad_tol, g.quad_max_level);
        std::ostringstream os;
        os << "# trine-figure3 v1\n";
        os << "N,estimator,max_mse,min_mse,parameter\n";
        for (int N : Ns) {
            for (const char *param : {"beta", "lambda"}) {
                Search s;
                run_search(s, e, param, N, grid.grid, tol, 0.0, -1.0, g);
                const trine_search_summary sum = s.summary();
                os << N << "," << trine_kind_name(sum.kind) << "," << num(sum.value, g.precision) << ","
                   << num(sum.min_mse, g.precision) << "," << num(sum.optimum, g.precision) << "\n";
            }
            trine_estimator_spec spec;
            trine_estimator_spec_default(&spec);
            spec.kind = TRINE_ML_TRINE;
            trine_profile *p = nullptr;
            check(trine_profile_create(e.ptr, &spec, N, &grid.grid, g.workers, &p), "figure3");
            trine_profile_summary sum;
            const trine_status st = trine_profile_get_summary(p, &sum);
            trine_profile_destroy(p);
            check(st, "figure3");
            os << N << "," << trine_kind_name(TRINE_ML_TRINE) << "," << num(sum.max_mse, g.precision)
               << "," << num(sum.min_mse, g.precision) << ",0\n";
        }
        if (out.empty()) {
            std::cout << os.str();
        } else {
            write_text(out, os.str());
        }
    }
};

struct SimulateCmd {
    EstimatorFlags est;
    double r = 0.0;
    double phi = 0.0;
    int N = 1;
    std::int64_t trials = 100000;
    std::uint64_t seed = 12345;
    std::string csv;

    void run(const Globals &g) const {
        Engine e(g.quad_tol, g.quad_max_level);
        const trine_estimator_spec spec = est.spec();
        trine_sim_config c;
        c.r = r;
        c.phi = phi;
        c.N = N;
        c.trials = trials;
        c.seed = seed;
        c.workers = g.workers;
        c.keep_trials = csv.empty() ? 0 : 1;
        trine_sim *sim = nullptr;
        check(trine_sim_run(e.ptr, &spec, &c, &sim), "simulate");
        trine_sim_summary s;
        trine_status st = trine_sim_get_summary(sim, &s);
        if (st == TRINE_OK && !csv.empty()) st = trine_sim_write_csv(sim, csv.c_str(), g.precision);
        trine_sim_destroy(sim);
        check(st, "simulate");
        std::cout << "estimator=" << trine_kind_name(spec.kind) << " N=" << N << " trials=" << s.trials
                  << " seed=" << seed << "\n";
        std::cout << "mean=" << num(s.mean, g.precision)
                  << " std_error=" << (std::isnan(s.std_error) ? std::string("n/a") : num(s.std_error, g.precision))
                  << " exact=" << num(s.exact_mse, g.precision) << "\n";
    }
};

struct DumpCmd {
    int n_max = 20;
    std::string out;
    bool verify = false;

    void run(const Globals &) const {
        if (out.empty()) throw Failure("--out is required");
        check(trine_dump_table(n_max, out.c_str()), "dump-table");
        if (verify) {
            std::size_t checks = 0;
            std::size_t failures = 0;
            check(trine_verify_table(n_max, &checks, &failures), "dump-table");
            std::cout << "checks=" << checks << " failures=" << failures << "\n";
            if (failures != 0) throw Failure(std::string("table verification failed: ") + trine_last_error());
        }
    }
};

// Flat key=value file; keys are long option names of the chosen command
// without the leading dashes. Options given on the command line win.
std::vector<std::string> merge_config(const std::string &path, CLI::App &app,
                                      const std::vector<std::string> &args) {
    std::ifstream in(path);
    if (!in) throw Failure("cannot read config file '" + path + "'");
    CLI::App *cmd = nullptr;
    for (const std::string &a : args) {
        if (!a.empty() && a[0] != '-') {
            for (CLI::App *sub : app.get_subcommands([](CLI::App *) { return true; })) {
                if (sub->get_name() == a) cmd = sub;
            }
            if (cmd != nullptr) break;
        }
    }
    if (cmd == nullptr) throw Failure("a command is required with --config");
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) {
            throw Failure(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string flag = "--" + key;
        const CLI::Option *opt = cmd->get_option_no_throw(flag);
        if (opt == nullptr) opt = app.get_option_no_throw(flag);
        if (opt == nullptr || key == "config") {
            throw Failure(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for " +
                          cmd->get_name());
        }
        bool given = false;
        for (const std::string &a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        }
        if (given) continue;
        if (opt->get_expected_max() == 0) {
            if (value == "true" || value == "1") extra.push_back(flag);
            else if (value != "false" && value != "0")
                throw Failure(path + ":" + std::to_string(lineno) + ": '" + key + "' expects true or false");
            continue;
        }
        extra.push_back(flag);
        std::istringstream vs(value);
        std::string tok;
        while (vs >> tok) extra.push_back(tok);
    }
    return extra;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Minimax mean estimation for trine qubit tomography"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    check(trine_default_workers(&g.workers), "workers");
    std::string config;
    app.add_option("--precision", g.precision, "significant digits of numeric output")
        ->capture_default_str()
        ->check(CLI::Range(1, 17));
    app.add_option("--workers", g.workers, "worker threads (default: TRINE_WORKERS or hardware)")
        ->check(CLI::Range(1, 1024));
    app.add_option("--quad-tol", g.quad_tol, "relative tolerance of moment quadratures")->capture_default_str();
    app.add_option("--quad-max-level", g.quad_max_level, "tanh-sinh refinement cap")->capture_default_str();
    app.add_option("--config", config, "key=value file of command options");
    app.set_version_flag("--version", std::string(trine_version()));

    MomentCmd moment;
    auto *c_moment = app.add_subcommand("moment", "print M_beta(n1, n2, n3)");
    c_moment->add_option("--beta", moment.beta, "weight exponent")->required();
    c_moment->add_option("--n", moment.n, "counts n1 n2 n3")->expected(3)->required();
    c_moment->add_flag("--exact", moment.exact, "exact rational (integer beta >= 1)");
    c_moment->add_flag("--quadrature", moment.quadrature, "force direct quadrature");
    c_moment->add_flag("--det", moment.det, "det(rho) weight by quadrature");
    c_moment->add_flag("--log", moment.log, "print ln M");

    EstimateCmd est;
    auto *c_est = app.add_subcommand("estimate", "estimate the state from counts");
    add_estimator_flags(c_est, est.est);
    c_est->add_option("--n", est.n, "counts n1 n2 n3")->expected(3)->required();

    RiskCmd risk;
    auto *c_risk = app.add_subcommand("risk", "exact MSE profile over the state space");
    add_estimator_flags(c_risk, risk.est);
    add_grid_flags(c_risk, risk.grid);
    c_risk->add_option("--N", risk.N, "measured copies")->required();
    c_risk->add_flag("--die-mode", risk.die_mode, "evaluate over the whole probability simplex");
    c_risk->add_flag("--oracle", risk.est.oracle, "profile the true-state oracle");
    c_risk->add_option("--csv", risk.csv, "write the node CSV here");
    c_risk->add_option("--json", risk.json, "write the summary JSON here");

    MinimaxCmd mm;
    auto *c_mm = app.add_subcommand("minimax", "minimax parameter search at one N");
    add_grid_flags(c_mm, mm.grid);
    c_mm->add_option("--N", mm.N, "measured copies")->required();
    c_mm->add_option("--param", mm.param, "beta (mean estimator) or lambda (corrected)")->capture_default_str();
    c_mm->add_option("--tol", mm.tol, "relative spread of max-MSE at which to stop")->capture_default_str();
    c_mm->add_option("--beta-lo", mm.beta_lo, "lower end of the beta range")->capture_default_str();
    c_mm->add_option("--beta-hi", mm.beta_hi, "upper end (default sqrt(N)/3 + 1)");
    c_mm->add_option("--csv", mm.csv, "write the sampled max-MSE curve here");
    c_mm->add_option("--json", mm.json, "write the summary JSON here");

    Figure2Cmd f2;
    auto *c_f2 = app.add_subcommand("figure2", "optimal beta versus N");
    add_grid_flags(c_f2, f2.grid);
    c_f2->add_option("--N", f2.Ns, "list of totals")->capture_default_str();
    c_f2->add_option("--tol", f2.tol, "search tolerance")->capture_default_str();
    c_f2->add_option("--out", f2.out, "CSV path (default: standard output)");

    Figure3Cmd f3;
    auto *c_f3 = app.add_subcommand("figure3", "max and min MSE of three estimators versus N");
    add_grid_flags(c_f3, f3.grid);
    c_f3->add_option("--N", f3.Ns, "list of totals")->capture_default_str();
    c_f3->add_option("--tol", f3.tol, "search tolerance")->capture_default_str();
    c_f3->add_option("--out", f3.out, "CSV path (default: standard output)");

    SimulateCmd sim;
    auto *c_sim = app.add_subcommand("simulate", "Monte-Carlo check of the exact MSE");
    add_estimator_flags(c_sim, sim.est);
    c_sim->add_option("--r", sim.r, "Bloch radius of the true state")->capture_default_str();
    c_sim->add_option("--phi", sim.phi, "Bloch angle of the true state")->capture_default_str();
    c_sim->add_option("--N", sim.N, "measured copies per trial")->required();
    c_sim->add_option("--trials", sim.trials, "number of trials")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    c_sim->add_flag("--oracle", sim.est.oracle, "use the true-state oracle");
    c_sim->add_option("--csv", sim.csv, "write every trial here");

    DumpCmd dump;
    auto *c_dump = app.add_subcommand("dump-table", "write the exact moment table");
    c_dump->add_option("--n-max", dump.n_max, "largest total")->capture_default_str();
    c_dump->add_option("--out", dump.out, "output path")->required();
    c_dump->add_flag("--verify", dump.verify, "run the exact structure checks too");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) {
                path = args[i + 1];
            } else if (args[i].rfind("--config=", 0) == 0) {
                path = args[i].substr(9);
            } else {
                continue;
            }
            const auto extra = merge_config(path, app, args);
            args.insert(args.end(), extra.begin(), extra.end());
            break;
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        // Help and version exit 0; every usage error maps to 2.
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const Failure &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*c_moment) moment.run(g);
        else if (*c_est) est.run(g);
        else if (*c_risk) risk.run(g);
        else if (*c_mm) mm.run(g);
        else if (*c_f2) f2.run(g);
        else if (*c_f3) f3.run(g);
        else if (*c_sim) sim.run(g);
        else if (*c_dump) dump.run(g);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout.flush();
    return std::cout ? 0 : 1;
}
