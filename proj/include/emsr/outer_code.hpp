/*
 * outer_code.hpp -- outer linear code: enumeration, distance, full-weight
 * counting, and the parameter planner for large-scale instantiations.
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
#include <string>
#include <vector>

#include "emsr/gf.hpp"

namespace emsr {

struct OuterCode {
    std::uint32_t q; // alphabet size (prime)
    std::uint32_t N; // length
    std::uint32_t K; // dimension
    std::uint64_t M; // q^K codewords
    std::uint32_t D; // minimum distance (brute-force verified)
    Field field;     // GF(q)
    // generator[d][x] = x^d for evaluation points x = 0..N-1.
    std::vector<std::vector<Fe>> generator;
    // All M codewords, enumerated by message index with base-q digits read
    // least-significant first. Values in [0, q).
    std::vector<std::vector<Fe>> codewords;

    // eval_map: symbol value v in [0, q) to inner column index v+1 in [1, q].
    std::uint32_t column(std::uint64_t block, std::uint32_t coord) const {
        return codewords[block][coord] + 1;
    }
};

// Reed-Solomon outer code on evaluation points {0, .., N-1}. Requires q
// prime, 1 <= K <= N; N > q throws NotEnoughEvaluationPoints. The whole code
// is enumerated and cached, so M = q^K is capped (desk scale).
OuterCode build_rs_outer(std::uint32_t q, std::uint32_t N, std::uint32_t K);

// Number of codewords with no zero coordinate, by enumeration.
std::uint64_t full_weight_count(const OuterCode& code);

// Truncated inclusion-exclusion lower bound on the full-weight count:
// sum_{p=0}^{K-g} (-1)^p C(N,p) q^(K-p)  -  C(N, K-g+1) q^g.
// Requires 0 <= g <= K and the ratio condition
// q > (N - (K-g+1)) / (K-g+2); otherwise throws BoundInapplicable.
std::int64_t fw_lower_bound(std::uint32_t N, std::uint32_t K, std::uint32_t g,
                            std::uint32_t q);

// Output of the asymptotic-family parameter planner.
struct PlanParams {
    std::uint32_t r = 0;
    double epsilon = 0;
    std::uint32_t u = 0;
    double threshold = 0;       // 2 (u+1)^2 r^2 / eps^2
    std::uint64_t q_min = 0;    // smallest prime square exceeding threshold
    std::uint32_t q_min_root = 0;
    double delta_min = 0;       // 1 - eps/(r-1)
    double genus_ratio = 0;     // 1 / (sqrt(q_min) - 1)
    std::string k_rule;         // dimension rule K = u*g
    double tprime_exponent = 0; // compulsory fraction: T' <= Ntot - Ntot^((u-1)/u)
    std::string tprime_rule;
    std::string subpacketization_note; // block length scales as O(log Ntot)
    std::string field_size_note;       // base field scales as O(Ntot)
};

// Planner for the genus-g family: smallest admissible square prime field,
// minimum relative distance, and scaling notes. Requires integer u > 3
// (InvalidU), eps > 0 and r >= 2 (InvalidParameters).
PlanParams ag_plan(std::uint32_t r, double epsilon, std::uint32_t u);

} // namespace emsr
