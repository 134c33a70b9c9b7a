/*
 * inner_msr.cpp -- inner MSR array code.
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
#include "emsr/inner_msr.hpp"

#include <algorithm>

#include "repair_kernel.hpp"

namespace emsr {

std::uint64_t SAryIndex::card() const noexcept {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < n; ++i) v *= s;
    return v;
}

std::uint32_t SAryIndex::digit(std::uint64_t b, std::uint32_t i) const {
    if (i < 1 || i > n)
        raise(Errc::index_out_of_range, "digit position outside [1, n]");
    std::uint64_t v = b;
    for (std::uint32_t j = 1; j < i; ++j) v /= s;
    return static_cast<std::uint32_t>(v % s);
}

std::uint64_t digit_replace(const SAryIndex& idx, std::uint64_t b,
                            std::uint32_t i, std::uint32_t u) {
    if (i < 1 || i > idx.n)
        raise(Errc::index_out_of_range, "digit position outside [1, n]");
    if (u >= idx.s)
        raise(Errc::index_out_of_range, "replacement digit outside [0, s)");
    std::uint64_t w = 1;
    for (std::uint32_t j = 1; j < i; ++j) w *= idx.s;
    std::uint32_t old = idx.digit(b, i);
    return b + (static_cast<std::uint64_t>(u) - old) * w;
}

InnerMsrCode build_inner(std::uint32_t n, std::uint32_t k, std::uint32_t t,
                         const Field& field) {
    if (k < 1 || !(k <= t) || !(t + 1 < n))
        raise(Errc::invalid_parameters, "need k <= t < n-1");
    std::uint32_t s = t - k + 1;
    if (s < 2)
        raise(Errc::invalid_parameters, "need s = t-k+1 >= 2");
    if (field.modulus() < static_cast<std::uint64_t>(s) * n + 1)
        raise(Errc::invalid_parameters, "field too small for s*n distinct nonzero lambda");

    InnerMsrCode code{n, k, t, n - k, s, 0, field, {}};
    code.ell = code.index_shape().card();
    code.lambda.assign(n, std::vector<Fe>(s));
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 0; j < s; ++j)
            code.lambda[i - 1][j] = (i - 1) * s + j + 1;
    return code;
}

Matrix inner_parity_matrix(const InnerMsrCode& code) {
    const std::uint64_t ell = code.ell;
    Matrix h(code.r * ell, code.n * ell);
    for (std::uint32_t j = 1; j <= code.r; ++j)
        for (std::uint32_t i = 1; i <= code.n; ++i)
            for (std::uint64_t b = 0; b < ell; ++b)
                h.at((j - 1) * ell + b, (i - 1) * ell + b) =
                    code.field.pow(code.eval_point(i, b), j - 1);
    return h;
}

namespace {

// Per position b the parity equations only couple position b of each block,
// with Vandermonde coefficients in the blocks' evaluation points. Solving
// for `unknown` blocks therefore reduces to ell independent r x |unknown|
// systems.
InnerCodeword solve_positions(const InnerMsrCode& code, const InnerCodeword& word,
                              const std::vector<std::uint32_t>& unknown) {
    const Field& f = code.field;
    InnerCodeword out = word;
    for (std::uint32_t i : unknown) out[i - 1].assign(code.ell, 0);
    std::vector<std::uint8_t> is_unknown(code.n + 1, 0);
    for (std::uint32_t i : unknown) is_unknown[i] = 1;

    Matrix a(code.r, unknown.size()), b(code.r, 1);
    for (std::uint64_t pos = 0; pos < code.ell; ++pos) {
        for (std::uint32_t m = 0; m < code.r; ++m) {
            Fe acc = 0;
            for (std::uint32_t i = 1; i <= code.n; ++i) {
                if (is_unknown[i]) continue;
                acc = f.add(acc, f.mul(f.pow(code.eval_point(i, pos), m),
                                       word[i - 1][pos]));
            }
            b.at(m, 0) = f.neg(acc);
            for (std::size_t u = 0; u < unknown.size(); ++u)
                a.at(m, u) = f.pow(code.eval_point(unknown[u], pos), m);
        }
        Matrix x;
        try {
            x = mat_solve_overdetermined(a, b, f);
        } catch (const Error& e) {
            if (e.code() == Errc::inconsistent_system)
                raise(Errc::not_a_codeword, "intact blocks violate parity");
            throw;
        }
        for (std::size_t u = 0; u < unknown.size(); ++u)
            out[unknown[u] - 1][pos] = x.at(u, 0);
    }
    return out;
}

} // namespace

InnerCodeword inner_encode(const InnerMsrCode& code, const std::vector<Fe>& message) {
    if (message.size() != static_cast<std::uint64_t>(code.k) * code.ell)
        raise(Errc::dimension_mismatch, "message length must be k*ell");
    InnerCodeword word(code.n);
    for (std::uint32_t i = 0; i < code.k; ++i)
        word[i].assign(message.begin() + i * code.ell,
                       message.begin() + (i + 1) * code.ell);
    std::vector<std::uint32_t> parity;
    for (std::uint32_t i = code.k + 1; i <= code.n; ++i) parity.push_back(i);
    for (std::uint32_t i : parity) word[i - 1].assign(code.ell, 0);
    return solve_positions(code, word, parity);
}

bool inner_verify(const InnerMsrCode& code, const InnerCodeword& word) {
    if (word.size() != code.n) return false;
    for (const auto& blk : word)
        if (blk.size() != code.ell) return false;
    const Field& f = code.field;
    for (std::uint32_t m = 0; m < code.r; ++m)
        for (std::uint64_t b = 0; b < code.ell; ++b) {
            Fe acc = 0;
            for (std::uint32_t i = 1; i <= code.n; ++i)
                acc = f.add(acc, f.mul(f.pow(code.eval_point(i, b), m), word[i - 1][b]));
            if (acc != 0) return false;
        }
    return true;
}

InnerCodeword inner_decode_erasures(const InnerMsrCode& code, const InnerCodeword& word,
                                    const std::set<std::uint32_t>& erased) {
    if (erased.size() > code.r)
        raise(Errc::too_many_erasures, "more erasures than parity blocks");
    for (std::uint32_t i : erased)
        if (i < 1 || i > code.n)
            raise(Errc::index_out_of_range, "erased block index outside [1, n]");
    if (word.size() != code.n)
        raise(Errc::dimension_mismatch, "word must have n blocks");
    std::vector<std::uint32_t> unknown(erased.begin(), erased.end());
    if (unknown.empty()) {
        if (!inner_verify(code, word))
            raise(Errc::not_a_codeword, "word violates parity");
        return word;
    }
    return solve_positions(code, word, unknown);
}

std::pair<std::vector<Fe>, InnerRepairTrace>
inner_repair(const InnerMsrCode& code, const InnerCodeword& word,
             std::uint32_t failed, const std::vector<std::uint32_t>& helpers) {
    if (failed < 1 || failed > code.n)
        raise(Errc::index_out_of_range, "failed block index outside [1, n]");
    std::set<std::uint32_t> hset(helpers.begin(), helpers.end());
    if (hset.size() != code.t || hset.size() != helpers.size())
        raise(Errc::bad_helper_set, "need exactly t distinct helpers");
    for (std::uint32_t h : hset)
        if (h < 1 || h > code.n || h == failed)
            raise(Errc::bad_helper_set, "helper outside [1, n] or equal to failed");

    const Field& f = code.field;
    const SAryIndex shape = code.index_shape();
    std::vector<Fe> roots(code.s);
    for (std::uint32_t u = 0; u < code.s; ++u) roots[u] = code.lambda_at(failed, u);
    std::vector<Fe> p0 = detail::poly_from_roots(roots, f);

    std::vector<std::uint32_t> others;
    for (std::uint32_t i = 1; i <= code.n; ++i)
        if (i != failed) others.push_back(i);
    std::vector<std::uint8_t> known(others.size(), 0);
    for (std::size_t v = 0; v < others.size(); ++v)
        known[v] = hset.count(others[v]) ? 1 : 0;

    InnerRepairTrace trace;
    std::vector<Fe> out(code.ell, 0);
    std::vector<Fe> qsum(code.r, 0); // inner code has no agreeing blocks
    std::vector<Fe> pts(others.size());
    std::vector<Fe> mu(others.size());

    try {
        for (std::uint64_t b = 0; b < code.ell; ++b) {
            if (shape.digit(b, failed) != 0) continue; // canonical group representative
            for (std::size_t v = 0; v < others.size(); ++v) {
                std::uint32_t node = others[v];
                pts[v] = code.eval_point(node, b);
                mu[v] = 0;
                if (!known[v]) continue;
                Fe acc = 0;
                for (std::uint32_t kk = 0; kk < code.s; ++kk)
                    acc = f.add(acc, word[node - 1][digit_replace(shape, b, failed, kk)]);
                mu[v] = acc;
                trace.per_helper[node] += 1;
                trace.total += 1;
            }
            std::vector<Fe> sym = detail::solve_group(f, code.r, code.s, roots, p0,
                                                      qsum, pts, mu, known);
            for (std::uint32_t kk = 0; kk < code.s; ++kk)
                out[digit_replace(shape, b, failed, kk)] = sym[kk];
        }
    } catch (const Error& e) {
        if (e.code() == Errc::inconsistent_system)
            raise(Errc::not_a_codeword, "helper data violates parity");
        throw;
    }
    return {std::move(out), std::move(trace)};
}

} // namespace emsr
