/*
 * inner_msr.hpp -- inner MSR array code: parity construction, systematic
 * encoding, MDS erasure decoding, and bandwidth-optimal single-node repair.
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
#include <set>
#include <utility>
#include <vector>

#include "emsr/gf.hpp"

namespace emsr {

// Shape of an s-ary position index: a value b in [0, s^n) read as digits
// (b_n, ..., b_1), digit i being the i-th base-s digit from the right.
struct SAryIndex {
    std::uint32_t s;
    std::uint32_t n;

    std::uint64_t card() const noexcept; // s^n

    // Digit at position i (1-based from the right). Throws IndexOutOfRange
    // for i outside [1, n].
    std::uint32_t digit(std::uint64_t b, std::uint32_t i) const;
};

// Returns b with digit i replaced by u. Throws IndexOutOfRange when i is not
// in [1, n] or u is not in [0, s).
std::uint64_t digit_replace(const SAryIndex& idx, std::uint64_t b,
                            std::uint32_t i, std::uint32_t u);

struct InnerMsrCode {
    std::uint32_t n, k, t;
    std::uint32_t r; // n - k
    std::uint32_t s; // t - k + 1
    std::uint64_t ell; // s^n
    Field field;
    // lambda[i-1][j] for node i in [1, n], digit j in [0, s): pairwise
    // distinct nonzero field elements.
    std::vector<std::vector<Fe>> lambda;

    SAryIndex index_shape() const noexcept { return SAryIndex{s, n}; }

    Fe lambda_at(std::uint32_t i, std::uint32_t j) const { return lambda[i - 1][j]; }

    // Diagonal entry of node i's parity block at position b: lambda_{i, b_i}.
    Fe eval_point(std::uint32_t i, std::uint64_t b) const {
        return lambda[i - 1][index_shape().digit(b, i)];
    }
};

// One block per node, each of ell symbols.
using InnerCodeword = std::vector<std::vector<Fe>>;

// Canonical parameter assignment: lambda_{i,j} = (i-1)*s + j + 1, giving the
// s*n distinct nonzero elements 1..s*n. Requires k <= t < n-1, s >= 2 and
// field modulus >= s*n + 1; otherwise throws InvalidParameters.
InnerMsrCode build_inner(std::uint32_t n, std::uint32_t k, std::uint32_t t,
                         const Field& field);

// Full parity-check matrix, r*ell x n*ell. Block (j, i) is diagonal with
// entry lambda_{i, b_i}^(j-1) at position b; the j=1 band is identities.
Matrix inner_parity_matrix(const InnerMsrCode& code);

// Systematic encoding: blocks 1..k hold the message, blocks k+1..n solve the
// parity equations. Message length must be k*ell (DimensionMismatch).
InnerCodeword inner_encode(const InnerMsrCode& code, const std::vector<Fe>& message);

bool inner_verify(const InnerMsrCode& code, const InnerCodeword& word);

// Reconstructs the unique codeword agreeing with the word on intact blocks.
// Content of erased blocks is ignored. Throws TooManyErasures when
// |erased| > r, NotACodeword when the intact data is inconsistent.
InnerCodeword inner_decode_erasures(const InnerMsrCode& code, const InnerCodeword& word,
                                    const std::set<std::uint32_t>& erased);

struct InnerRepairTrace {
    // node -> downloaded symbol count; exactly ell/s per helper.
    std::map<std::uint32_t, std::uint64_t> per_helper;
    std::uint64_t total = 0;
};

// Repairs one failed block from exactly t helpers, downloading one group sum
// per helper per s-ary group (ell/s symbols each). Throws BadHelperSet when
// the helper set is not t distinct live nodes.
std::pair<std::vector<Fe>, InnerRepairTrace>
inner_repair(const InnerMsrCode& code, const InnerCodeword& word,
             std::uint32_t failed, const std::vector<std::uint32_t>& helpers);

} // namespace emsr
