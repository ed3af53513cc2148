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

#include "trine/moment_table.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "trine/errors.hpp"

namespace trine {

namespace {

constexpr const char *kFormatTag = "trine-moments-v1";

const mpz_class &entry(const std::vector<mpz_class> &values, const MomentLevel &level,
                       const CountVector &counts) {
    return values[level.index.index(counts)];
}

CountVector shifted(CountVector c, int plus, int minus) {
    ++c.n[plus];
    --c.n[minus];
    return c;
}

CountVector decremented(CountVector c, int k) {
    --c.n[k];
    return c;
}

double lg2_factorial(int n) { return std::lgamma(n + 1.0) / std::log(2.0); }

} // namespace

std::array<int, 3> canonical_counts(const CountVector &counts) {
    std::array<int, 3> s = counts.n;
    if (s[0] < s[1]) std::swap(s[0], s[1]);
    if (s[1] < s[2]) std::swap(s[1], s[2]);
    if (s[0] < s[1]) std::swap(s[0], s[1]);
    return s;
}

CanonicalIndex::CanonicalIndex(int N) : N_(N) {
    require(N >= 0, ErrorCode::InvalidArgument, "level must be non-negative");
    for (int c = 0; 3 * c <= N; ++c) {
        offset_.push_back(size_);
        size_ += static_cast<std::size_t>((N - c) / 2 - c + 1);
    }
}

std::array<int, 3> CanonicalIndex::triple(std::size_t idx) const {
    const auto it = std::upper_bound(offset_.begin(), offset_.end(), idx);
    const int c = static_cast<int>(it - offset_.begin()) - 1;
    const int b = c + static_cast<int>(idx - offset_[static_cast<std::size_t>(c)]);
    return {N_ - b - c, b, c};
}

MomentLevel first_moment_level() {
    MomentLevel level{CanonicalIndex(0), 1, 1, 1, {mpz_class(1)}, {mpz_class(1)}};
    return level;
}

mpz_class l_numerator_via(const CountVector &target, int j, const MomentLevel &current,
                          const MomentLevel *older) {
    require(target[j] >= 1, ErrorCode::InvalidArgument,
            "recurrence direction needs a positive count");
    const int N = current.total();
    require(target.total() == N + 1, ErrorCode::InvalidArgument, "target is not on the next level");
    const CountVector n = decremented(target, j);
    const int k = (j + 1) % 3;
    const int l = (j + 2) % 3;

    // 6(N+1) L(t) = 2(N+1+n_j) L(n) + 2 n_k L(n+e_j-e_k) + 2 n_l L(n+e_j-e_l)
    //               - n_k L(n-e_k) - n_l L(n-e_l),    with D_N = 6 N D_{N-1}.
    mpz_class out;
    mpz_mul_ui(out.get_mpz_t(), entry(current.l_num, current, n).get_mpz_t(),
               2ul * static_cast<unsigned long>(N + 1 + n[j]));
    for (int other : {k, l}) {
        if (n[other] == 0) {
            continue;
        }
        mpz_addmul_ui(out.get_mpz_t(), entry(current.l_num, current, shifted(n, j, other)).get_mpz_t(),
                      2ul * static_cast<unsigned long>(n[other]));
        mpz_submul_ui(out.get_mpz_t(), entry(older->l_num, *older, decremented(n, other)).get_mpz_t(),
                      6ul * static_cast<unsigned long>(N) * static_cast<unsigned long>(n[other]));
    }
    return out;
}

MomentLevel next_moment_level(const MomentLevel &current, const MomentLevel *older) {
    const int N = current.total();
    require(N == 0 || older != nullptr, ErrorCode::InvalidArgument, "recurrence needs two levels");
    const unsigned long next = static_cast<unsigned long>(N + 1);

    MomentLevel out;
    out.index = CanonicalIndex(N + 1);
    out.l_den = current.l_den * (6ul * next);
    out.m_den = current.m_den * (3ul * (next + 2ul)) * (6ul * next);
    out.m_from_l = current.m_from_l * (3ul * (next + 1ul));
    out.l_num.resize(out.index.size());
    out.m_num.resize(out.index.size());

    for (std::size_t idx = 0; idx < out.index.size(); ++idx) {
        const auto t = out.index.triple(idx);
        const CountVector target{t};
        out.l_num[idx] = l_numerator_via(target, 0, current, older);

        // C_{N+1}(t) = 3^{N+1} (N+2)! A_{N+1}(t) + 6(N+1) sum_k t_k C_N(t - e_k)
        mpz_class &m = out.m_num[idx];
        mpz_mul(m.get_mpz_t(), out.m_from_l.get_mpz_t(), out.l_num[idx].get_mpz_t());
        for (int k = 0; k < 3; ++k) {
            if (t[k] == 0) {
                continue;
            }
            mpz_addmul_ui(m.get_mpz_t(), entry(current.m_num, current, decremented(target, k)).get_mpz_t(),
                          6ul * next * static_cast<unsigned long>(t[k]));
        }
    }
    return out;
}

std::size_t MomentTable::estimated_bytes(int n_max) {
    double bytes = 0.0;
    const double lg6 = std::log2(6.0);
    for (int N = 0; N <= n_max; ++N) {
        const double entries = static_cast<double>(CanonicalIndex(N).size());
        const double bits_l = lg2_factorial(N) + 64.0;
        const double bits_m = lg2_factorial(N + 2) + lg2_factorial(N) + N * lg6 + 64.0;
        bytes += entries * ((bits_l + bits_m) / 8.0 + 2.0 * (sizeof(mpz_class) + 16.0));
    }
    return static_cast<std::size_t>(bytes);
}

std::size_t MomentTable::default_memory_budget() { return std::size_t{2} << 30; }

MomentTable MomentTable::build(int n_max, std::size_t memory_budget) {
    require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be non-negative");
    const std::size_t budget = memory_budget == 0 ? default_memory_budget() : memory_budget;
    if (estimated_bytes(n_max) > budget) {
        std::ostringstream msg;
        msg << "exact moment table with n_max=" << n_max << " needs about "
            << estimated_bytes(n_max) / (1u << 20) << " MiB, over the budget of " << budget / (1u << 20)
            << " MiB";
        fail(ErrorCode::Capacity, msg.str());
    }
    MomentTable table;
    table.levels_.reserve(static_cast<std::size_t>(n_max) + 1);
    table.levels_.push_back(first_moment_level());
    for (int N = 0; N < n_max; ++N) {
        const MomentLevel *older = N > 0 ? &table.levels_[static_cast<std::size_t>(N) - 1] : nullptr;
        table.levels_.push_back(next_moment_level(table.levels_[static_cast<std::size_t>(N)], older));
    }
    return table;
}

const MomentLevel &MomentTable::level(int N) const {
    if (N < 0 || N > n_max()) {
        std::ostringstream msg;
        msg << "total " << N << " is outside the moment table (n_max=" << n_max() << ")";
        fail(ErrorCode::Range, msg.str());
    }
    return levels_[static_cast<std::size_t>(N)];
}

mpq_class MomentTable::M(const CountVector &counts) const {
    check_counts(counts);
    const MomentLevel &lv = level(counts.total());
    mpq_class q(entry(lv.m_num, lv, counts), lv.m_den);
    q.canonicalize();
    return q;
}

mpq_class MomentTable::L(const CountVector &counts) const {
    check_counts(counts);
    const MomentLevel &lv = level(counts.total());
    mpq_class q(entry(lv.l_num, lv, counts), lv.l_den);
    q.canonicalize();
    return q;
}

double MomentTable::log_M(const CountVector &counts) const {
    check_counts(counts);
    const MomentLevel &lv = level(counts.total());
    return log_ratio(entry(lv.m_num, lv, counts), lv.m_den);
}

void MomentTable::dump(std::ostream &out) const {
    out << "# trine exact moment table; one line per permutation class n1>=n2>=n3\n";
    out << "format " << kFormatTag << "\n";
    out << "n_max " << n_max() << "\n";
    out << "# n1 n2 n3 M L\n";
    for (const MomentLevel &lv : levels_) {
        for (std::size_t idx = 0; idx < lv.index.size(); ++idx) {
            const auto t = lv.index.triple(idx);
            mpq_class m(lv.m_num[idx], lv.m_den);
            mpq_class l(lv.l_num[idx], lv.l_den);
            m.canonicalize();
            l.canonicalize();
            out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << m.get_num() << '/' << m.get_den() << ' '
                << l.get_num() << '/' << l.get_den() << '\n';
        }
    }
}

MomentTable MomentTable::load(std::istream &in) {
    std::string line;
    int n_max = -1;
    bool tagged = false;
    MomentTable table;
    std::vector<std::vector<bool>> seen;
    std::size_t line_no = 0;
    auto bad = [&](const std::string &why) {
        std::ostringstream msg;
        msg << "moment table line " << line_no << ": " << why;
        fail(ErrorCode::Io, msg.str());
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head == "format") {
            std::string tag;
            fields >> tag;
            if (tag != kFormatTag) {
                bad("unsupported format tag '" + tag + "'");
            }
            tagged = true;
            continue;
        }
        if (head == "n_max") {
            if (!(fields >> n_max) || n_max < 0) {
                bad("invalid n_max");
            }
            // Denominators follow the construction, so level metadata comes
            // from the recurrence bookkeeping rather than the file.
            MomentLevel lv = first_moment_level();
            for (int N = 0; N <= n_max; ++N) {
                if (N > 0) {
                    const auto next = static_cast<unsigned long>(N);
                    MomentLevel nl;
                    nl.index = CanonicalIndex(N);
                    nl.l_den = lv.l_den * (6ul * next);
                    nl.m_den = lv.m_den * (3ul * (next + 2ul)) * (6ul * next);
                    nl.m_from_l = lv.m_from_l * (3ul * (next + 1ul));
                    lv = std::move(nl);
                }
                lv.l_num.assign(lv.index.size(), mpz_class(0));
                lv.m_num.assign(lv.index.size(), mpz_class(0));
                table.levels_.push_back(lv);
                seen.emplace_back(lv.index.size(), false);
            }
            continue;
        }
        if (!tagged || n_max < 0) {
            bad("data before the format/n_max header");
        }
        CountVector c;
        std::string m_text;
        std::string l_text;
        try {
            c[0] = std::stoi(head);
        } catch (const std::exception &) {
            bad("expected a count");
        }
        if (!(fields >> c[1] >> c[2] >> m_text >> l_text)) {
            bad("expected 'n1 n2 n3 M L'");
        }
        if (c.min() < 0 || c.total() > n_max || canonical_counts(c) != c.n) {
            bad("count vector is not canonical or exceeds n_max");
        }
        MomentLevel &lv = table.levels_[static_cast<std::size_t>(c.total())];
        const std::size_t idx = lv.index.index(c);
        if (seen[static_cast<std::size_t>(c.total())][idx]) {
            bad("duplicate entry");
        }
        mpq_class m;
        mpq_class l;
        if (m.set_str(m_text, 10) != 0 || l.set_str(l_text, 10) != 0) {
            bad("malformed rational");
        }
        m.canonicalize();
        l.canonicalize();
        const mpq_class m_scaled = m * lv.m_den;
        const mpq_class l_scaled = l * lv.l_den;
        if (m_scaled.get_den() != 1 || l_scaled.get_den() != 1) {
            bad("value is inconsistent with the level denominator");
        }
        lv.m_num[idx] = m_scaled.get_num();
        lv.l_num[idx] = l_scaled.get_num();
        seen[static_cast<std::size_t>(c.total())][idx] = true;
    }
    if (n_max < 0) {
        fail(ErrorCode::Io, "moment table has no n_max header");
    }
    for (const auto &row : seen) {
        if (std::find(row.begin(), row.end(), false) != row.end()) {
            fail(ErrorCode::Io, "moment table is missing entries");
        }
    }
    return table;
}

StructureReport verify_structure(const MomentTable &table) {
    StructureReport report;
    report.anchors_ok = table.M(CountVector{}) == 1 && table.L(CountVector{}) == 1;
    if (!report.anchors_ok) {
        report.first_failure = "M(0,0,0) or L(0,0,0) differs from 1";
    }
    auto note = [&](const std::string &what, const std::array<int, 3> &t) {
        if (report.first_failure.empty()) {
            std::ostringstream msg;
            msg << what << " at (" << t[0] << "," << t[1] << "," << t[2] << ")";
            report.first_failure = msg.str();
        }
    };

    mpz_class lhs;
    mpz_class rhs;
    for (int N = 0; N < table.n_max(); ++N) {
        const MomentLevel &lv = table.level(N);
        const MomentLevel &up = table.level(N + 1);
        const auto n1 = static_cast<unsigned long>(N + 1);
        const unsigned long m_step = 3ul * (n1 + 2ul) * 6ul * n1;
        const unsigned long l_step = 6ul * n1;
        for (std::size_t idx = 0; idx < lv.index.size(); ++idx) {
            const auto t = lv.index.triple(idx);
            const CountVector n{t};
            lhs = 0;
            for (int k = 0; k < 3; ++k) {
                lhs += entry(up.m_num, up, increment(n, k));
            }
            mpz_mul_ui(rhs.get_mpz_t(), lv.m_num[idx].get_mpz_t(), m_step);
            ++report.sum_rule_checks;
            if (lhs != rhs) {
                ++report.sum_rule_failures;
                note("M sum rule fails", t);
            }
            lhs = 0;
            for (int k = 0; k < 3; ++k) {
                lhs += entry(up.l_num, up, increment(n, k));
            }
            mpz_mul_ui(rhs.get_mpz_t(), lv.l_num[idx].get_mpz_t(), l_step);
            ++report.sum_rule_checks;
            if (lhs != rhs) {
                ++report.sum_rule_failures;
                note("L sum rule fails", t);
            }
        }
    }

    for (int N = 1; N <= table.n_max(); ++N) {
        const MomentLevel &lv = table.level(N);
        const MomentLevel &prev = table.level(N - 1);
        const MomentLevel *older = N >= 2 ? &table.level(N - 2) : nullptr;
        for (std::size_t idx = 0; idx < lv.index.size(); ++idx) {
            const auto t = lv.index.triple(idx);
            const CountVector target{t};
            // Relabelling the axes maps routes onto each other, so the
            // distinct routes are "which of the distinct values of t is
            // decremented". Direction 0 is how the table was built.
            for (int j = 1; j < 3; ++j) {
                if (t[j] == 0 || t[j] == t[j - 1]) {
                    continue;
                }
                ++report.symmetry_checks;
                if (l_numerator_via(target, j, prev, older) != lv.l_num[idx]) {
                    ++report.symmetry_failures;
                    note("L recurrence routes disagree", t);
                }
            }
        }
    }
    return report;
}

const char *special_kind_name(SpecialKind kind) {
    switch (kind) {
    case SpecialKind::M_n00:
        return "M(n,0,0)";
    case SpecialKind::L_n00:
        return "L(n,0,0)";
    case SpecialKind::L_n10:
        return "L(n,1,0)";
    case SpecialKind::L_n20:
        return "L(n,2,0)";
    case SpecialKind::L_nnn:
        return "L(n,n,n)";
    }
    return "?";
}

SpecialKind parse_special_kind(const std::string &name) {
    static const std::map<std::string, SpecialKind> kinds = {
        {"M(n,0,0)", SpecialKind::M_n00}, {"L(n,0,0)", SpecialKind::L_n00},
        {"L(n,1,0)", SpecialKind::L_n10}, {"L(n,2,0)", SpecialKind::L_n20},
        {"L(n,n,n)", SpecialKind::L_nnn},
    };
    const auto it = kinds.find(name);
    if (it == kinds.end()) {
        fail(ErrorCode::Unsupported, "no closed form for '" + name + "'");
    }
    return it->second;
}

CountVector special_counts(SpecialKind kind, int n) {
    switch (kind) {
    case SpecialKind::M_n00:
    case SpecialKind::L_n00:
        return CountVector{{n, 0, 0}};
    case SpecialKind::L_n10:
        return CountVector{{n, 1, 0}};
    case SpecialKind::L_n20:
        return CountVector{{n, 2, 0}};
    case SpecialKind::L_nnn:
        return CountVector{{n, n, n}};
    }
    fail(ErrorCode::Unsupported, "unknown closed-form kind");
}

mpq_class special_closed_form(SpecialKind kind, int n) {
    require(n >= 0, ErrorCode::InvalidArgument, "closed forms need n >= 0");
    auto factorial = [](int k) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
        return f;
    };
    auto central = [](int k) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), 2ul * static_cast<unsigned long>(k), static_cast<unsigned long>(k));
        return c;
    };
    auto inverse_power = [](unsigned long base, int k) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), base, static_cast<unsigned long>(k));
        return mpq_class(1, p);
    };

    mpq_class out;
    switch (kind) {
    case SpecialKind::M_n00: {
        mpq_class bracket = 1;
        for (int k = 1; k <= n; ++k) {
            bracket += inverse_power(2, k) * mpq_class(central(k) * (k + 1));
        }
        out = 2 * inverse_power(3, n) * mpq_class(factorial(n), factorial(n + 2)) * bracket;
        break;
    }
    case SpecialKind::L_n00:
        out = inverse_power(6, n) * mpq_class(central(n));
        break;
    case SpecialKind::L_n10:
        out = inverse_power(6, n + 1) * mpq_class(central(n)) * mpq_class(n + 2, n + 1);
        break;
    case SpecialKind::L_n20:
        out = inverse_power(6, n + 2) * mpq_class(central(n)) *
              (1 + mpq_class(2 * (4 * n + 5), (n + 1) * (n + 2)));
        break;
    case SpecialKind::L_nnn:
        if (n == 0) {
            out = 1;
        } else {
            out = 2 * inverse_power(216, n) * mpq_class(factorial(2 * n - 1), factorial(n - 1) * factorial(n));
        }
        break;
    }
    out.canonicalize();
    return out;
}

double log_ratio(const mpz_class &num, const mpz_class &den) {
    long num_exp = 0;
    long den_exp = 0;
    const double num_mant = mpz_get_d_2exp(&num_exp, num.get_mpz_t());
    const double den_mant = mpz_get_d_2exp(&den_exp, den.get_mpz_t());
    return std::log(num_mant / den_mant) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

double log_of(const mpq_class &value) { return log_ratio(value.get_num(), value.get_den()); }

} // namespace trine
