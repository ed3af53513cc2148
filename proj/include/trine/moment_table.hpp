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
 * Exact beta = 1 moments of the trine disk.
 *
 *   M(n) = 2 int_0^1 dr r int dphi/2pi  p1^n1 p2^n2 p3^n3
 *   L(n) =          int dphi/2pi  p1^n1 p2^n2 p3^n3  at r = 1
 *
 * Both are generated level by level (level = total clicks) from
 * M(0,0,0) = L(0,0,0) = 1 by the divergence-theorem recurrence for M and the
 * angular-derivative recurrence for L. Every value of a level shares one
 * denominator, so the table stores a single big integer numerator per
 * entry (no gcd work during construction); canonical rationals are produced
 * on request. Only one representative per permutation class is stored.
 */

#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "trine/trine_core.hpp"

namespace trine {

/// Sorted-descending representative of a count vector's permutation class.
std::array<int, 3> canonical_counts(const CountVector &counts);

/// Index of canonical triples (a >= b >= c, a + b + c = N) within a level.
class CanonicalIndex {
  public:
    explicit CanonicalIndex(int N = 0);

    int total() const { return N_; }
    std::size_t size() const { return size_; }
    std::size_t index(const std::array<int, 3> &sorted) const {
        return offset_[static_cast<std::size_t>(sorted[2])] +
               static_cast<std::size_t>(sorted[1] - sorted[2]);
    }
    std::size_t index(const CountVector &counts) const { return index(canonical_counts(counts)); }
    std::array<int, 3> triple(std::size_t idx) const;

  private:
    int N_ = 0;
    std::size_t size_ = 0;
    std::vector<std::size_t> offset_;
};

/// One level of the exact recurrence: numerators over shared denominators.
///   L(n) = l_num[idx] / l_den,   l_den = 6^N N!
///   M(n) = m_num[idx] / m_den,   m_den = 3^N (N+2)! 6^N N! / 2
struct MomentLevel {
    CanonicalIndex index;
    mpz_class l_den;
    mpz_class m_den;
    /// 3^N (N+1)! = 2 m_den / ((N+2) l_den); the weight of 2 L in the M step.
    mpz_class m_from_l;
    std::vector<mpz_class> l_num;
    std::vector<mpz_class> m_num;

    int total() const { return index.total(); }
};

/// Level 0: M = L = 1.
MomentLevel first_moment_level();

/// Level N + 1 from levels N and N - 1 (`older` may be null when N = 0).
MomentLevel next_moment_level(const MomentLevel &current, const MomentLevel *older);

/// Numerator of L(target) on the shared denominator of its level, computed
/// by the recurrence that increments coordinate `direction` (which must be
/// >= 1 in `target`). Different directions are independent routes to the
/// same value.
mpz_class l_numerator_via(const CountVector &target, int direction, const MomentLevel &current,
                          const MomentLevel *older);

/// Exact table for every count vector with total <= n_max.
class MomentTable {
  public:
    /// Rough heap footprint of a table with the given cap.
    static std::size_t estimated_bytes(int n_max);
    static std::size_t default_memory_budget();

    /// Builds the table, throwing Capacity when the estimate exceeds the
    /// budget (0 selects default_memory_budget()).
    static MomentTable build(int n_max, std::size_t memory_budget = 0);

    int n_max() const { return static_cast<int>(levels_.size()) - 1; }
    const MomentLevel &level(int N) const;

    mpq_class M(const CountVector &counts) const;
    mpq_class L(const CountVector &counts) const;
    double log_M(const CountVector &counts) const;

    /// Writes the versioned text format (see docs/FORMATS.md).
    void dump(std::ostream &out) const;
    static MomentTable load(std::istream &in);

  private:
    std::vector<MomentLevel> levels_;
};

/// Result of the exhaustive exact checks on a table.
struct StructureReport {
    std::size_t sum_rule_checks = 0;
    std::size_t sum_rule_failures = 0;
    std::size_t symmetry_checks = 0;
    std::size_t symmetry_failures = 0;
    bool anchors_ok = false;
    std::string first_failure;

    bool ok() const { return anchors_ok && sum_rule_failures == 0 && symmetry_failures == 0; }
};

/// Sum rule M(n+e1) + M(n+e2) + M(n+e3) = M(n) and agreement of the L
/// recurrence along every admissible direction, both in exact integers.
StructureReport verify_structure(const MomentTable &table);

enum class SpecialKind { M_n00, L_n00, L_n10, L_n20, L_nnn };

const char *special_kind_name(SpecialKind kind);
SpecialKind parse_special_kind(const std::string &name);

/// Closed-form special cases of the beta = 1 moments, evaluated exactly.
mpq_class special_closed_form(SpecialKind kind, int n);

/// Count vector described by a special kind at parameter n.
CountVector special_counts(SpecialKind kind, int n);

/// Converts an exact value to ln(value) without overflow.
double log_of(const mpq_class &value);
double log_ratio(const mpz_class &num, const mpz_class &den);

} // namespace trine
