/*
 * emsr_code.hpp -- composed erasure code: scalar selection, parity assembly,
 * encoding, MDS verification, repair planning and the metered repair engine.
 *
 * Copyright 2026 emsr contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "emsr/inner_msr.hpp"
#include "emsr/outer_code.hpp"

namespace emsr {

// Composed code: M blocks, each indexed by an outer codeword; block i stores
// N sub-blocks of ell symbols (one per outer coordinate). The parity matrix
// couples, for every coordinate j and position b, symbol b of sub-block j of
// every block through a Vandermonde row in the per-block evaluation points
// sigma_i * lambda_{col(i,j), b_col(i,j)}.
struct EmsrCode {
    InnerMsrCode inner;
    OuterCode outer;
    double epsilon;
    std::vector<Fe> sigma; // one per block, pairwise distinct nonzero

    std::uint64_t num_blocks() const noexcept { return outer.M; }          // script N
    std::uint64_t data_blocks() const noexcept { return outer.M - inner.r; } // script K
    std::uint64_t contacted() const noexcept {                              // script T
        return outer.M - inner.n + inner.t;
    }
    std::uint64_t block_len() const noexcept {                              // script L
        return static_cast<std::uint64_t>(outer.N) * inner.ell;
    }
    std::uint32_t non_contacted_count() const noexcept { return inner.r - inner.s; }

    double delta() const noexcept {
        return static_cast<double>(outer.D) / outer.N;
    }
    // The per-helper budget is guaranteed when delta >= 1 - eps/(r-1).
    // Tracked, not enforced, so eps = 0 instances remain constructible
    // for experiments.
    bool delta_hypothesis_holds() const noexcept {
        return delta() >= 1.0 - epsilon / (inner.r - 1.0) - 1e-12;
    }
    // The per-helper budget admits even full-block downloads iff
    // (1+eps)/s >= 1.
    bool epsilon_vacuous() const noexcept { return epsilon >= inner.s - 1.0; }

    double helper_budget() const noexcept {
        return (1.0 + epsilon) * static_cast<double>(block_len()) / inner.s;
    }

    // Inner column index of block i at coordinate j (1-based i, j).
    std::uint32_t column(std::uint64_t i, std::uint32_t j) const {
        return outer.column(i - 1, j - 1);
    }
    // Evaluation point of block i at coordinate j, position b.
    Fe eval_point(std::uint64_t i, std::uint32_t j, std::uint64_t b) const {
        return inner.field.mul(sigma[i - 1], inner.eval_point(column(i, j), b));
    }
};

// Block i as a flat vector of N*ell symbols, sub-block j at [(j-1)*ell, j*ell).
using Block = std::vector<Fe>;
using EmsrCodeword = std::vector<Block>;

// Deterministic greedy scalar selection over the given field: ascending
// candidate scan per block, accepting the smallest value that keeps every
// realized evaluation-point product distinct from every other chosen block's
// (for all coordinate pairs where the two blocks' outer columns differ, all
// s x s digit combinations). Throws FieldTooSmall when the field is
// exhausted before M scalars are found.
std::vector<Fe> select_scalars(const Field& field, const InnerMsrCode& inner,
                               const OuterCode& outer);

// Composes inner and outer codes over the given field. Validates q <= n,
// q > r, coordinate balance, and the scalar predicate. Throws
// InvalidParameters / FieldTooSmall accordingly.
EmsrCode build_emsr(const Field& field, std::uint32_t n, std::uint32_t k,
                    std::uint32_t t, std::uint32_t q, std::uint32_t N,
                    std::uint32_t K, double epsilon);

// Convenience builder: searches primes ascending from max(s*n+1, M+1) and
// returns the code over the first field admitting a scalar assignment.
EmsrCode build_emsr_auto(std::uint32_t n, std::uint32_t k, std::uint32_t t,
                         std::uint32_t q, std::uint32_t N, std::uint32_t K,
                         double epsilon);

// Thick parity column of block i: r*N*ell x N*ell, band j scaled by
// sigma_i^(j-1), diagonal blocks from the inner code's column col(i, .).
Matrix emsr_parity_column(const EmsrCode& code, std::uint64_t i);

// Systematic encoding, blocks 1..M-r. Message length (M-r)*N*ell
// (DimensionMismatch), laid out block-major, then coordinate, then position.
EmsrCodeword emsr_encode(const EmsrCode& code, const std::vector<Fe>& message);

bool emsr_verify(const EmsrCode& code, const EmsrCodeword& word);

// MDS erasure decoding: reconstructs all blocks from any >= M-r intact ones.
// `erased` blocks' contents are ignored. Throws TooManyErasures when
// |erased| > r, NotACodeword on inconsistent intact data.
EmsrCodeword emsr_decode_erasures(const EmsrCode& code, const EmsrCodeword& word,
                                  const std::set<std::uint64_t>& erased);

struct MdsViolation {
    std::vector<std::uint64_t> blocks; // the r-subset E
    std::uint32_t coordinate;
};

struct MdsReport {
    std::uint64_t checked = 0;
    bool pass = true;
    std::optional<MdsViolation> witness;
};

// Verifies that every r-subset of thick columns restricted to each
// coordinate has full rank r*ell (the executable MDS criterion). Exhaustive
// mode sweeps all C(M, r) subsets; otherwise `samples` random subsets drawn
// from the given seed. Stops at the first violation.
MdsReport mds_check(const EmsrCode& code, bool exhaustive,
                    std::uint64_t samples = 0, std::uint64_t seed = 0);

struct CompulsoryInfo {
    // q_sets[j-1]: blocks agreeing with the failed block at coordinate j
    // (size M/q - 1 each).
    std::vector<std::vector<std::uint64_t>> q_sets;
    std::vector<std::uint64_t> united; // union of all q_sets, ascending
    std::uint64_t helper_count = 0;    // |united| = M - 1 - W
    std::uint64_t inclusive_bound = 0; // M - W (counts the failed block too)
};

CompulsoryInfo compulsory_sets(const EmsrCode& code, std::uint64_t failed);

struct RepairPlan {
    std::uint64_t failed = 0;
    std::vector<std::uint64_t> helpers;       // contacted set P, ascending, size T
    std::vector<std::vector<std::uint64_t>> q_sets; // per coordinate
    std::vector<std::uint64_t> non_contacted; // size r - s
};

// Free-slot fill order for the non-compulsory part of the contacted set.
enum class FreePolicy { ascending, seeded_random };

// Default plan: all compulsory blocks plus free blocks chosen by the policy
// (ascending index unless seeded_random with the given seed).
RepairPlan plan_repair(const EmsrCode& code, std::uint64_t failed,
                       FreePolicy policy = FreePolicy::ascending,
                       std::uint64_t seed = 0);

// Explicit plan: `helpers` must be exactly the contacted set (size T,
// excluding failed, containing every compulsory block). Throws
// MissingCompulsory / BadPlanSize.
RepairPlan plan_repair(const EmsrCode& code, std::uint64_t failed,
                       const std::vector<std::uint64_t>& helpers);

// Annihilator coefficient matrix for (failed, coordinate): (r-s) x r, row i
// holding the coefficients of x^i * p0(x) where p0 vanishes exactly on the
// failed block's s evaluation points at that coordinate.
Matrix interpolation_matrix(const EmsrCode& code, std::uint64_t failed,
                            std::uint32_t coordinate);

struct BandwidthReport {
    std::uint64_t failed = 0;
    double epsilon = 0;
    double budget = 0; // (1+eps) * L / s, per helper
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_helper; // block -> symbols
    std::uint64_t total = 0;
    std::uint64_t max_helper = 0;
};

struct RepairResult {
    Block block;
    BandwidthReport report;
};

// Scratch buffers reused across groups and coordinates of one repair.
struct RepairWorkspace {
    std::vector<Fe> roots, p0, qsum, pts, mu;
    std::vector<std::uint8_t> known;
    std::vector<Fe> helper_points; // per contacted V_j member, current group
};

// Repairs the failed block from the planned helpers. Downloads, per
// coordinate j: s symbols per group from each block in Q_j and one group sum
// from every other contacted block. The failed block's entry in `word` is
// never read. Throws ScalarValidationBug when a recovery system is singular
// and NotACodeword when a surfaced inconsistency proves the helpers are not
// part of one codeword. Helpers are otherwise trusted: each group solve is
// exactly determined (r equations, r unknowns), so corrupted helper data is
// absorbed into a wrong block that emsr_verify will reject, not detected
// here. Minimum-bandwidth downloads carry no redundancy.
RepairResult execute_repair(const EmsrCode& code, const EmsrCodeword& word,
                            const RepairPlan& plan, RepairWorkspace& ws);
RepairResult execute_repair(const EmsrCode& code, const EmsrCodeword& word,
                            const RepairPlan& plan);

struct BandwidthCheck {
    bool pass = false;            // every helper within budget
    bool hypothesis_holds = false; // delta >= 1 - eps/(r-1)
    bool epsilon_vacuous = false;  // budget admits full-block downloads
};

BandwidthCheck bandwidth_check(const BandwidthReport& report, const EmsrCode& code);

} // namespace emsr
