/*
 * emsr_code.cpp -- composed erasure code engine.
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
#include "emsr/emsr_code.hpp"

#include <algorithm>

#include "repair_kernel.hpp"
#include "rng.hpp"

namespace emsr {

namespace {

// The scalar predicate for one ordered pair of blocks: wherever their outer
// columns differ, the two blocks' evaluation-point sets must be disjoint
// (all s*s products distinct). This keeps every repair system nonsingular:
// no helper point collides with a root of the failed block's annihilator,
// and cross-column helper points stay pairwise distinct.
bool pair_compatible(const Field& f, const InnerMsrCode& inner, const OuterCode& outer,
                     Fe sx, std::uint64_t x, Fe sy, std::uint64_t y) {
    for (std::uint32_t j = 0; j < outer.N; ++j) {
        std::uint32_t cx = outer.column(x, j);
        std::uint32_t cy = outer.column(y, j);
        if (cx == cy) continue;
        for (std::uint32_t d = 0; d < inner.s; ++d)
            for (std::uint32_t d2 = 0; d2 < inner.s; ++d2)
                if (f.mul(sx, inner.lambda_at(cx, d)) == f.mul(sy, inner.lambda_at(cy, d2)))
                    return false;
    }
    return true;
}

} // namespace

std::vector<Fe> select_scalars(const Field& field, const InnerMsrCode& inner,
                               const OuterCode& outer) {
    if (field.modulus() <= outer.M)
        raise(Errc::field_too_small, "fewer nonzero elements than blocks");
    std::vector<Fe> chosen;
    std::vector<std::uint8_t> used(field.modulus(), 0);
    chosen.reserve(outer.M);
    for (std::uint64_t i = 0; i < outer.M; ++i) {
        Fe found = 0;
        for (Fe cand = 1; cand < field.modulus(); ++cand) {
            if (used[cand]) continue;
            bool ok = true;
            for (std::uint64_t y = 0; y < chosen.size() && ok; ++y)
                ok = pair_compatible(field, inner, outer, cand, i, chosen[y], y);
            if (ok) { found = cand; break; }
        }
        if (found == 0)
            raise(Errc::field_too_small, "scalar search exhausted the field");
        chosen.push_back(found);
        used[found] = 1;
    }
    return chosen;
}

EmsrCode build_emsr(const Field& field, std::uint32_t n, std::uint32_t k,
                    std::uint32_t t, std::uint32_t q, std::uint32_t N,
                    std::uint32_t K, double epsilon) {
    InnerMsrCode inner = build_inner(n, k, t, field);
    OuterCode outer = build_rs_outer(q, N, K);
    if (q > n)
        raise(Errc::invalid_parameters, "outer alphabet exceeds inner length (need q <= n)");
    if (q <= inner.r)
        raise(Errc::invalid_parameters, "outer alphabet too small (need q > r)");
    if (epsilon < 0)
        raise(Errc::invalid_parameters, "epsilon must be >= 0");
    if (outer.M % q != 0)
        raise(Errc::invalid_parameters, "codeword count not divisible by q");

    // Coordinate balance underpins the compulsory-set law |Q_j| = M/q - 1.
    for (std::uint32_t j = 0; j < N; ++j) {
        std::vector<std::uint64_t> hist(q, 0);
        for (std::uint64_t m = 0; m < outer.M; ++m) ++hist[outer.codewords[m][j]];
        for (std::uint64_t h : hist)
            if (h != outer.M / q)
                raise(Errc::invalid_parameters, "outer code coordinate not balanced");
    }

    std::vector<Fe> sigma = select_scalars(field, inner, outer);
    return EmsrCode{std::move(inner), std::move(outer), epsilon, std::move(sigma)};
}

EmsrCode build_emsr_auto(std::uint32_t n, std::uint32_t k, std::uint32_t t,
                         std::uint32_t q, std::uint32_t N, std::uint32_t K,
                         double epsilon) {
    std::uint64_t m = 1;
    for (std::uint32_t d = 0; d < K; ++d) m *= q;
    std::uint32_t s = t >= k ? t - k + 1 : 0;
    std::uint64_t start = std::max<std::uint64_t>(static_cast<std::uint64_t>(s) * n + 1, m + 1);
    auto is_prime = [](std::uint64_t x) {
        if (x < 2) return false;
        for (std::uint64_t d = 2; d * d <= x; ++d)
            if (x % d == 0) return false;
        return true;
    };
    for (std::uint64_t p = start;; ++p) {
        if (p >= (1ull << 31))
            raise(Errc::field_too_small, "prime search exceeded the 31-bit field limit");
        if (!is_prime(p)) continue;
        try {
            return build_emsr(Field(static_cast<std::uint32_t>(p)), n, k, t, q, N, K, epsilon);
        } catch (const Error& e) {
            if (e.code() != Errc::field_too_small) throw;
        }
    }
}

Matrix emsr_parity_column(const EmsrCode& code, std::uint64_t i) {
    if (i < 1 || i > code.num_blocks())
        raise(Errc::index_out_of_range, "block index outside [1, M]");
    const std::uint64_t ell = code.inner.ell;
    const std::uint32_t N = code.outer.N, r = code.inner.r;
    const std::uint64_t L = code.block_len();
    Matrix h(r * L, L);
    for (std::uint32_t j = 1; j <= r; ++j)
        for (std::uint32_t jj = 1; jj <= N; ++jj)
            for (std::uint64_t b = 0; b < ell; ++b) {
                std::uint64_t row = (j - 1) * L + (jj - 1) * ell + b;
                std::uint64_t col = (jj - 1) * ell + b;
                h.at(row, col) = code.inner.field.pow(code.eval_point(i, jj, b), j - 1);
            }
    return h;
}

namespace {

// Per (coordinate, position) the parity equations couple only that symbol of
// each block, through a Vandermonde row in the per-block evaluation points.
// Solving for `unknown` blocks is therefore N*ell independent small systems.
void solve_blocks(const EmsrCode& code, EmsrCodeword& word,
                  const std::vector<std::uint64_t>& unknown) {
    const Field& f = code.inner.field;
    const std::uint64_t ell = code.inner.ell;
    const std::uint64_t M = code.num_blocks();
    std::vector<std::uint8_t> is_unknown(M + 1, 0);
    for (std::uint64_t i : unknown) is_unknown[i] = 1;

    Matrix a(code.inner.r, unknown.size()), b(code.inner.r, 1);
    std::vector<Fe> pt(M + 1);
    for (std::uint32_t j = 1; j <= code.outer.N; ++j) {
        for (std::uint64_t pos = 0; pos < ell; ++pos) {
            for (std::uint64_t i = 1; i <= M; ++i) pt[i] = code.eval_point(i, j, pos);
            for (std::uint32_t m = 0; m < code.inner.r; ++m) {
                Fe acc = 0;
                for (std::uint64_t i = 1; i <= M; ++i) {
                    if (is_unknown[i]) continue;
                    acc = f.add(acc, f.mul(f.pow(pt[i], m), word[i - 1][(j - 1) * ell + pos]));
                }
                b.at(m, 0) = f.neg(acc);
                for (std::size_t u = 0; u < unknown.size(); ++u)
                    a.at(m, u) = f.pow(pt[unknown[u]], m);
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
                word[unknown[u] - 1][(j - 1) * ell + pos] = x.at(u, 0);
        }
    }
}

} // namespace

EmsrCodeword emsr_encode(const EmsrCode& code, const std::vector<Fe>& message) {
    const std::uint64_t L = code.block_len();
    if (message.size() != code.data_blocks() * L)
        raise(Errc::dimension_mismatch, "message length must be (M-r)*N*ell");
    EmsrCodeword word(code.num_blocks());
    for (std::uint64_t i = 0; i < code.data_blocks(); ++i)
        word[i].assign(message.begin() + i * L, message.begin() + (i + 1) * L);
    std::vector<std::uint64_t> parity;
    for (std::uint64_t i = code.data_blocks() + 1; i <= code.num_blocks(); ++i) {
        parity.push_back(i);
        word[i - 1].assign(L, 0);
    }
    solve_blocks(code, word, parity);
    return word;
}

bool emsr_verify(const EmsrCode& code, const EmsrCodeword& word) {
    if (word.size() != code.num_blocks()) return false;
    for (const auto& blk : word)
        if (blk.size() != code.block_len()) return false;
    const Field& f = code.inner.field;
    const std::uint64_t ell = code.inner.ell;
    for (std::uint32_t j = 1; j <= code.outer.N; ++j)
        for (std::uint64_t pos = 0; pos < ell; ++pos)
            for (std::uint32_t m = 0; m < code.inner.r; ++m) {
                Fe acc = 0;
                for (std::uint64_t i = 1; i <= code.num_blocks(); ++i)
                    acc = f.add(acc, f.mul(f.pow(code.eval_point(i, j, pos), m),
                                           word[i - 1][(j - 1) * ell + pos]));
                if (acc != 0) return false;
            }
    return true;
}

EmsrCodeword emsr_decode_erasures(const EmsrCode& code, const EmsrCodeword& word,
                                  const std::set<std::uint64_t>& erased) {
    if (erased.size() > code.inner.r)
        raise(Errc::too_many_erasures, "more erasures than parity blocks");
    for (std::uint64_t i : erased)
        if (i < 1 || i > code.num_blocks())
            raise(Errc::index_out_of_range, "erased block index outside [1, M]");
    if (word.size() != code.num_blocks())
        raise(Errc::dimension_mismatch, "word must have M blocks");
    EmsrCodeword out = word;
    std::vector<std::uint64_t> unknown(erased.begin(), erased.end());
    for (std::uint64_t i : unknown) out[i - 1].assign(code.block_len(), 0);
    if (unknown.empty()) {
        if (!emsr_verify(code, out))
            raise(Errc::not_a_codeword, "word violates parity");
        return out;
    }
    solve_blocks(code, out, unknown);
    return out;
}

namespace {

Matrix mds_submatrix(const EmsrCode& code, const std::vector<std::uint64_t>& blocks,
                     std::uint32_t j) {
    const std::uint64_t ell = code.inner.ell;
    const std::uint32_t r = code.inner.r;
    Matrix u(r * ell, blocks.size() * ell);
    for (std::size_t ci = 0; ci < blocks.size(); ++ci)
        for (std::uint32_t m = 0; m < r; ++m)
            for (std::uint64_t b = 0; b < ell; ++b)
                u.at(m * ell + b, ci * ell + b) =
                    code.inner.field.pow(code.eval_point(blocks[ci], j, b), m);
    return u;
}

} // namespace

MdsReport mds_check(const EmsrCode& code, bool exhaustive,
                    std::uint64_t samples, std::uint64_t seed) {
    const std::uint32_t r = code.inner.r;
    const std::uint64_t M = code.num_blocks();
    const std::uint64_t target_rank = static_cast<std::uint64_t>(r) * code.inner.ell;
    MdsReport report;

    auto check_subset = [&](const std::vector<std::uint64_t>& subset) {
        for (std::uint32_t j = 1; j <= code.outer.N; ++j) {
            ++report.checked;
            if (mat_rank(mds_submatrix(code, subset, j), code.inner.field) != target_rank) {
                report.pass = false;
                report.witness = MdsViolation{subset, j};
                return false;
            }
        }
        return true;
    };

    if (exhaustive) {
        std::vector<std::uint64_t> subset(r);
        for (std::uint32_t i = 0; i < r; ++i) subset[i] = i + 1;
        while (true) {
            if (!check_subset(subset)) return report;
            // next lexicographic r-combination of [1, M]
            std::int32_t pos = r - 1;
            while (pos >= 0 && subset[pos] == M - (r - 1 - pos)) --pos;
            if (pos < 0) break;
            ++subset[pos];
            for (std::uint32_t i = pos + 1; i < r; ++i) subset[i] = subset[i - 1] + 1;
        }
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t it = 0; it < samples; ++it) {
            std::set<std::uint64_t> pick;
            while (pick.size() < r) pick.insert(detail::rng_below(rng, M) + 1);
            std::vector<std::uint64_t> subset(pick.begin(), pick.end());
            if (!check_subset(subset)) return report;
        }
    }
    return report;
}

CompulsoryInfo compulsory_sets(const EmsrCode& code, std::uint64_t failed) {
    if (failed < 1 || failed > code.num_blocks())
        raise(Errc::index_out_of_range, "failed block index outside [1, M]");
    CompulsoryInfo info;
    info.q_sets.assign(code.outer.N, {});
    std::vector<std::uint8_t> in_union(code.num_blocks() + 1, 0);
    for (std::uint32_t j = 1; j <= code.outer.N; ++j)
        for (std::uint64_t i = 1; i <= code.num_blocks(); ++i) {
            if (i == failed) continue;
            if (code.column(i, j) == code.column(failed, j)) {
                info.q_sets[j - 1].push_back(i);
                in_union[i] = 1;
            }
        }
    for (std::uint64_t i = 1; i <= code.num_blocks(); ++i)
        if (in_union[i]) info.united.push_back(i);
    info.helper_count = info.united.size();
    info.inclusive_bound = code.num_blocks() - full_weight_count(code.outer);
    return info;
}

namespace {

RepairPlan finish_plan(const EmsrCode& code, std::uint64_t failed,
                       CompulsoryInfo&& info, std::vector<std::uint64_t>&& helpers) {
    RepairPlan plan;
    plan.failed = failed;
    plan.helpers = std::move(helpers);
    std::sort(plan.helpers.begin(), plan.helpers.end());
    plan.q_sets = std::move(info.q_sets);
    std::vector<std::uint8_t> contacted(code.num_blocks() + 1, 0);
    for (std::uint64_t h : plan.helpers) contacted[h] = 1;
    for (std::uint64_t i = 1; i <= code.num_blocks(); ++i)
        if (i != failed && !contacted[i]) plan.non_contacted.push_back(i);
    return plan;
}

} // namespace

RepairPlan plan_repair(const EmsrCode& code, std::uint64_t failed,
                       FreePolicy policy, std::uint64_t seed) {
    CompulsoryInfo info = compulsory_sets(code, failed);
    std::vector<std::uint8_t> taken(code.num_blocks() + 1, 0);
    taken[failed] = 1;
    for (std::uint64_t i : info.united) taken[i] = 1;

    std::uint64_t tsize = code.contacted();
    if (info.united.size() > tsize)
        raise(Errc::bad_plan_size, "compulsory set exceeds the contacted budget");
    std::uint64_t need = tsize - info.united.size();

    std::vector<std::uint64_t> candidates;
    for (std::uint64_t i = 1; i <= code.num_blocks(); ++i)
        if (!taken[i]) candidates.push_back(i);
    if (need > candidates.size())
        raise(Errc::bad_plan_size, "not enough free blocks to fill the plan");

    std::vector<std::uint64_t> helpers = info.united;
    if (policy == FreePolicy::seeded_random) {
        std::mt19937_64 rng(seed);
        for (std::size_t i = candidates.size(); i > 1; --i)
            std::swap(candidates[i - 1], candidates[detail::rng_below(rng, i)]);
    }
    helpers.insert(helpers.end(), candidates.begin(), candidates.begin() + need);
    return finish_plan(code, failed, std::move(info), std::move(helpers));
}

RepairPlan plan_repair(const EmsrCode& code, std::uint64_t failed,
                       const std::vector<std::uint64_t>& helpers) {
    CompulsoryInfo info = compulsory_sets(code, failed);
    if (helpers.size() != code.contacted())
        raise(Errc::bad_plan_size, "contacted set must have exactly T members");
    std::vector<std::uint8_t> seen(code.num_blocks() + 1, 0);
    for (std::uint64_t h : helpers) {
        if (h < 1 || h > code.num_blocks() || h == failed)
            raise(Errc::bad_plan_size, "helper outside [1, M] or equal to failed");
        if (seen[h])
            raise(Errc::bad_plan_size, "duplicate helper");
        seen[h] = 1;
    }
    for (std::uint64_t i : info.united)
        if (!seen[i])
            raise(Errc::missing_compulsory, "plan omits a compulsory block");
    std::vector<std::uint64_t> copy = helpers;
    return finish_plan(code, failed, std::move(info), std::move(copy));
}

Matrix interpolation_matrix(const EmsrCode& code, std::uint64_t failed,
                            std::uint32_t coordinate) {
    if (failed < 1 || failed > code.num_blocks())
        raise(Errc::index_out_of_range, "failed block index outside [1, M]");
    if (coordinate < 1 || coordinate > code.outer.N)
        raise(Errc::index_out_of_range, "coordinate outside [1, N]");
    const Field& f = code.inner.field;
    const std::uint32_t s = code.inner.s, r = code.inner.r;
    std::uint32_t a = code.column(failed, coordinate);
    std::vector<Fe> roots(s);
    for (std::uint32_t u = 0; u < s; ++u)
        roots[u] = f.mul(code.sigma[failed - 1], code.inner.lambda_at(a, u));
    std::vector<Fe> p0 = detail::poly_from_roots(roots, f);
    Matrix p(r - s, r);
    for (std::uint32_t i = 0; i < r - s; ++i)
        for (std::uint32_t m = 0; m <= s; ++m)
            p.at(i, i + m) = p0[m];
    return p;
}

RepairResult execute_repair(const EmsrCode& code, const EmsrCodeword& word,
                            const RepairPlan& plan, RepairWorkspace& ws) {
    const Field& f = code.inner.field;
    const std::uint32_t s = code.inner.s, r = code.inner.r, N = code.outer.N;
    const std::uint64_t ell = code.inner.ell;
    const SAryIndex shape = code.inner.index_shape();

    if (word.size() != code.num_blocks())
        raise(Errc::dimension_mismatch, "word must have M blocks");
    for (std::uint64_t h : plan.helpers)
        if (word[h - 1].size() != code.block_len())
            raise(Errc::dimension_mismatch, "helper block has wrong length");

    std::vector<std::uint64_t> counts(code.num_blocks() + 1, 0);
    Block out(code.block_len(), 0);

    std::vector<std::uint8_t> contacted(code.num_blocks() + 1, 0);
    for (std::uint64_t h : plan.helpers) contacted[h] = 1;

    try {
        for (std::uint32_t j = 1; j <= N; ++j) {
            std::uint32_t a = code.column(plan.failed, j);
            ws.roots.assign(s, 0);
            for (std::uint32_t u = 0; u < s; ++u)
                ws.roots[u] = f.mul(code.sigma[plan.failed - 1], code.inner.lambda_at(a, u));
            ws.p0 = detail::poly_from_roots(ws.roots, f);

            // Disagreeing blocks in ascending order: contacted first-class,
            // non-contacted recovered by interpolation.
            std::vector<std::uint64_t> vlist;
            for (std::uint64_t i = 1; i <= code.num_blocks(); ++i)
                if (i != plan.failed && code.column(i, j) != a) vlist.push_back(i);
            ws.known.assign(vlist.size(), 0);
            for (std::size_t v = 0; v < vlist.size(); ++v)
                ws.known[v] = contacted[vlist[v]];

            const auto& qset = plan.q_sets[j - 1];
            ws.qsum.assign(r, 0);
            ws.pts.assign(vlist.size(), 0);
            ws.mu.assign(vlist.size(), 0);

            for (std::uint64_t b = 0; b < ell; ++b) {
                if (shape.digit(b, a) != 0) continue; // canonical representative
                std::fill(ws.qsum.begin(), ws.qsum.end(), 0);
                for (std::uint64_t qi : qset) {
                    for (std::uint32_t kk = 0; kk < s; ++kk) {
                        std::uint64_t pos = digit_replace(shape, b, a, kk);
                        Fe sym = word[qi - 1][(j - 1) * ell + pos];
                        Fe pt = f.mul(code.sigma[qi - 1], code.inner.lambda_at(a, kk));
                        Fe acc = sym;
                        for (std::uint32_t m = 0; m < r; ++m) {
                            ws.qsum[m] = f.add(ws.qsum[m], acc);
                            acc = f.mul(acc, pt);
                        }
                    }
                    counts[qi] += s;
                }
                for (std::size_t v = 0; v < vlist.size(); ++v) {
                    std::uint64_t blk = vlist[v];
                    ws.pts[v] = code.eval_point(blk, j, b);
                    ws.mu[v] = 0;
                    if (!ws.known[v]) continue;
                    Fe acc = 0;
                    for (std::uint32_t kk = 0; kk < s; ++kk)
                        acc = f.add(acc, word[blk - 1][(j - 1) * ell +
                                                       digit_replace(shape, b, a, kk)]);
                    ws.mu[v] = acc;
                    counts[blk] += 1;
                }
                std::vector<Fe> sym = detail::solve_group(f, r, s, ws.roots, ws.p0,
                                                          ws.qsum, ws.pts, ws.mu, ws.known);
                for (std::uint32_t kk = 0; kk < s; ++kk)
                    out[(j - 1) * ell + digit_replace(shape, b, a, kk)] = sym[kk];
            }
        }
    } catch (const Error& e) {
        if (e.code() == Errc::inconsistent_system)
            raise(Errc::not_a_codeword, "helper data violates parity");
        throw;
    }

    RepairResult result;
    result.block = std::move(out);
    result.report.failed = plan.failed;
    result.report.epsilon = code.epsilon;
    result.report.budget = code.helper_budget();
    for (std::uint64_t h : plan.helpers) {
        result.report.per_helper.emplace_back(h, counts[h]);
        result.report.total += counts[h];
        result.report.max_helper = std::max(result.report.max_helper, counts[h]);
    }
    return result;
}

RepairResult execute_repair(const EmsrCode& code, const EmsrCodeword& word,
                            const RepairPlan& plan) {
    RepairWorkspace ws;
    return execute_repair(code, word, plan, ws);
}

BandwidthCheck bandwidth_check(const BandwidthReport& report, const EmsrCode& code) {
    BandwidthCheck chk;
    chk.pass = true;
    for (const auto& [block, symbols] : report.per_helper) {
        (void)block;
        if (static_cast<double>(symbols) > report.budget + 1e-9) {
            chk.pass = false;
            break;
        }
    }
    chk.hypothesis_holds = code.delta_hypothesis_holds();
    chk.epsilon_vacuous = code.epsilon_vacuous();
    return chk;
}

} // namespace emsr
