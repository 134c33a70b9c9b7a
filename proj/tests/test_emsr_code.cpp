/*
 * test_emsr_code.cpp -- composed code tests: scalar selection, parity
 * structure, encoding against a dense oracle, MDS verification, repair
 * planning, the repair engine, and bandwidth accounting.
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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "emsr/emsr_code.hpp"
#include "test_util.hpp"

using namespace emsr;
using emsr_test::random_symbols;

namespace {

const EmsrCode& desk() {
    static EmsrCode code = build_emsr_auto(5, 2, 3, 5, 4, 2, 0.5);
    return code;
}

Block poison(const EmsrCode& code) {
    return Block(code.block_len(), 77 % code.inner.field.modulus());
}

std::uint32_t agreements(const EmsrCode& code, std::uint64_t helper,
                         std::uint64_t failed) {
    std::uint32_t w = 0;
    for (std::uint32_t j = 1; j <= code.outer.N; ++j)
        w += (code.column(helper, j) == code.column(failed, j));
    return w;
}

} // namespace

TEST_CASE("auto builder lands on the frozen desk instance") {
    const EmsrCode& code = desk();
    CHECK(code.inner.field.modulus() == 107);
    CHECK(code.num_blocks() == 25);
    CHECK(code.data_blocks() == 22);
    CHECK(code.contacted() == 23);
    CHECK(code.block_len() == 128);
    CHECK(code.non_contacted_count() == 1);
    CHECK(code.delta() == doctest::Approx(0.75));
    CHECK(code.delta_hypothesis_holds());
    CHECK(!code.epsilon_vacuous());
    CHECK(code.helper_budget() == doctest::Approx(96.0));

    const std::vector<Fe> sigma{1,  2,  3,  4,  5,  11, 13, 7,  10,
                                17, 19, 12, 20, 21, 59, 30, 26, 51,
                                16, 56, 49, 68, 100, 55, 87};
    CHECK(code.sigma == sigma);

    CHECK(code.inner.lambda_at(1, 0) == 1);
    CHECK(code.inner.lambda_at(1, 1) == 2);
    CHECK(code.inner.lambda_at(5, 0) == 9);
    CHECK(code.inner.lambda_at(5, 1) == 10);
}

TEST_CASE("scalar selection enforces the realized distinctness predicate") {
    const EmsrCode& code = desk();
    const Field& f = code.inner.field;

    std::set<Fe> seen;
    for (Fe v : code.sigma) {
        CHECK(v != 0);
        CHECK(seen.insert(v).second);
    }

    // for every ordered block pair and coordinate where the outer columns
    // differ, all s x s evaluation-point products are distinct
    for (std::uint64_t x = 1; x <= code.num_blocks(); ++x)
        for (std::uint64_t y = 1; y <= code.num_blocks(); ++y) {
            if (x == y) continue;
            for (std::uint32_t j = 1; j <= code.outer.N; ++j) {
                std::uint32_t cx = code.column(x, j), cy = code.column(y, j);
                if (cx == cy) continue;
                for (std::uint32_t d = 0; d < code.inner.s; ++d)
                    for (std::uint32_t e = 0; e < code.inner.s; ++e)
                        CHECK(f.mul(code.sigma[x - 1], code.inner.lambda_at(cx, d)) !=
                              f.mul(code.sigma[y - 1], code.inner.lambda_at(cy, e)));
            }
        }
}

TEST_CASE("scalar selection fails honestly on small fields") {
    InnerMsrCode inner11 = build_inner(5, 2, 3, Field(11));
    OuterCode rs = build_rs_outer(5, 4, 2);
    CHECK_ERRC(select_scalars(Field(11), inner11, rs), Errc::field_too_small);

    InnerMsrCode inner29 = build_inner(5, 2, 3, Field(29));
    CHECK_ERRC(select_scalars(Field(29), inner29, rs), Errc::field_too_small);
}

TEST_CASE("composition rejects incompatible parameters") {
    CHECK_ERRC(build_emsr(Field(107), 5, 2, 3, 7, 4, 2, 0.5),
               Errc::invalid_parameters); // q > n
    CHECK_ERRC(build_emsr(Field(107), 5, 2, 3, 3, 3, 2, 0.5),
               Errc::invalid_parameters); // q <= r
    CHECK_ERRC(build_emsr(Field(107), 5, 2, 3, 5, 4, 2, -0.25),
               Errc::invalid_parameters); // eps < 0
    CHECK_ERRC(build_emsr(Field(11), 5, 2, 3, 5, 4, 2, 0.5),
               Errc::field_too_small);
}

TEST_CASE("thick parity columns have the band-and-diagonal shape") {
    const EmsrCode& code = desk();
    const Field& f = code.inner.field;
    const std::uint64_t ell = code.inner.ell;
    const std::uint64_t L = code.block_len();

    Matrix col = emsr_parity_column(code, 7);
    CHECK(col.rows() == code.inner.r * L);
    CHECK(col.cols() == L);
    for (std::uint32_t band = 0; band < code.inner.r; ++band)
        for (std::uint32_t j = 1; j <= code.outer.N; ++j)
            for (std::uint64_t b = 0; b < ell; ++b) {
                std::uint64_t row = band * L + (j - 1) * ell + b;
                Fe want = f.pow(code.eval_point(7, j, b), band);
                for (std::uint64_t c = 0; c < L; ++c) {
                    Fe got = col.at(row, c);
                    if (c == (j - 1) * ell + b)
                        CHECK(got == want);
                    else
                        CHECK(got == 0);
                }
            }
}

TEST_CASE("encoding is systematic, satisfies parity, matches a dense solve") {
    const EmsrCode& code = desk();
    const Field& f = code.inner.field;
    const std::uint64_t L = code.block_len();
    const std::uint64_t M = code.num_blocks();
    const std::uint32_t r = code.inner.r;

    std::vector<Fe> zero(code.data_blocks() * L, 0);
    for (const Block& blk : emsr_encode(code, zero))
        for (Fe v : blk) CHECK(v == 0);

    CHECK_ERRC(emsr_encode(code, std::vector<Fe>(7)), Errc::dimension_mismatch);

    std::mt19937_64 rng(41);
    std::vector<Fe> msg = random_symbols(code.data_blocks() * L, f, rng);
    EmsrCodeword word = emsr_encode(code, msg);
    REQUIRE(word.size() == M);
    CHECK(emsr_verify(code, word));
    for (std::uint64_t i = 0; i < code.data_blocks(); ++i)
        for (std::uint64_t x = 0; x < L; ++x)
            CHECK(word[i][x] == msg[i * L + x]);

    // tampering breaks verification
    EmsrCodeword bad = word;
    bad[3][5] = f.add(bad[3][5], 1);
    CHECK(!emsr_verify(code, bad));

    // dense oracle: solve the full r*L x r*L system on the parity blocks
    std::vector<Matrix> cols;
    for (std::uint64_t i = 1; i <= M; ++i) cols.push_back(emsr_parity_column(code, i));
    Matrix a(r * L, r * L), b(r * L, 1);
    for (std::uint64_t row = 0; row < r * L; ++row) {
        for (std::uint32_t pi = 0; pi < r; ++pi)
            for (std::uint64_t c = 0; c < L; ++c)
                a.at(row, pi * L + c) = cols[M - r + pi].at(row, c);
        Fe acc = 0;
        for (std::uint64_t i = 0; i < M - r; ++i)
            for (std::uint64_t c = 0; c < L; ++c)
                acc = f.add(acc, f.mul(cols[i].at(row, c), word[i][c]));
        b.at(row, 0) = f.neg(acc);
    }
    Matrix x = mat_solve(a, b, f);
    for (std::uint32_t pi = 0; pi < r; ++pi)
        for (std::uint64_t c = 0; c < L; ++c)
            CHECK(word[M - r + pi][c] == x.at(pi * L + c, 0));
}

TEST_CASE("erasure decoding restores any r blocks, rejects r+1") {
    const EmsrCode& code = desk();
    std::mt19937_64 rng(42);
    std::vector<Fe> msg =
        random_symbols(code.data_blocks() * code.block_len(), code.inner.field, rng);
    EmsrCodeword word = emsr_encode(code, msg);

    CHECK(emsr_decode_erasures(code, word, {}) == word);

    for (const std::set<std::uint64_t>& erased :
         {std::set<std::uint64_t>{1, 13, 25}, {23, 24, 25}, {1, 2, 3}, {5, 17}}) {
        EmsrCodeword damaged = word;
        for (std::uint64_t i : erased) damaged[i - 1] = poison(code);
        CHECK(emsr_decode_erasures(code, damaged, erased) == word);
    }

    CHECK_ERRC(emsr_decode_erasures(code, word, {1, 2, 3, 4}),
               Errc::too_many_erasures);

    EmsrCodeword corrupt = word;
    corrupt[0][0] = code.inner.field.add(corrupt[0][0], 1);
    CHECK_ERRC(emsr_decode_erasures(code, corrupt, {25}), Errc::not_a_codeword);
}

TEST_CASE("sampled MDS verification passes on the desk instance") {
    MdsReport rep = mds_check(desk(), false, 40, 7);
    CHECK(rep.pass);
    CHECK(rep.checked == 40 * 4);
    CHECK(!rep.witness.has_value());
}

TEST_CASE("MDS verification catches an engineered eval-point collision") {
    EmsrCode broken = desk();
    // sigma_2 * lambda(2, 0) == sigma_1 * lambda(1, 0): blocks 1 and 2 share
    // an evaluation point, so every subset containing both is singular
    broken.sigma[1] = ff_inv(3, broken.inner.field);
    MdsReport rep = mds_check(broken, true);
    CHECK(!rep.pass);
    REQUIRE(rep.witness.has_value());
    const auto& blocks = rep.witness->blocks;
    CHECK(std::find(blocks.begin(), blocks.end(), 1) != blocks.end());
    CHECK(std::find(blocks.begin(), blocks.end(), 2) != blocks.end());
}

TEST_CASE("compulsory sets: sizes, union, and agreement semantics") {
    const EmsrCode& code = desk();
    for (std::uint64_t failed = 1; failed <= code.num_blocks(); ++failed) {
        CompulsoryInfo info = compulsory_sets(code, failed);
        REQUIRE(info.q_sets.size() == code.outer.N);
        CHECK(info.helper_count == 16);
        CHECK(info.united.size() == 16);
        CHECK(info.inclusive_bound == 17);
        CHECK(info.helper_count == info.inclusive_bound - 1);

        std::set<std::uint64_t> seen;
        for (std::uint32_t j = 1; j <= code.outer.N; ++j) {
            CHECK(info.q_sets[j - 1].size() == code.num_blocks() / code.outer.q - 1);
            for (std::uint64_t i : info.q_sets[j - 1]) {
                CHECK(i != failed);
                CHECK(code.column(i, j) == code.column(failed, j));
                seen.insert(i);
            }
        }
        CHECK(std::vector<std::uint64_t>(seen.begin(), seen.end()) == info.united);
    }
}

TEST_CASE("default repair plans cover compulsory blocks under both policies") {
    const EmsrCode& code = desk();
    for (std::uint64_t failed : {std::uint64_t{1}, std::uint64_t{13}, std::uint64_t{25}}) {
        CompulsoryInfo info = compulsory_sets(code, failed);
        RepairPlan plan = plan_repair(code, failed);
        CHECK(plan.failed == failed);
        CHECK(plan.helpers.size() == code.contacted());
        CHECK(std::is_sorted(plan.helpers.begin(), plan.helpers.end()));
        CHECK(plan.non_contacted.size() == 1);
        std::set<std::uint64_t> hs(plan.helpers.begin(), plan.helpers.end());
        CHECK(hs.size() == plan.helpers.size());
        CHECK(hs.count(failed) == 0);
        for (std::uint64_t c : info.united) CHECK(hs.count(c) == 1);
        for (std::uint64_t v : plan.non_contacted) {
            CHECK(v != failed);
            CHECK(hs.count(v) == 0);
        }

        RepairPlan ra = plan_repair(code, failed, FreePolicy::seeded_random, 99);
        RepairPlan rb = plan_repair(code, failed, FreePolicy::seeded_random, 99);
        CHECK(ra.helpers == rb.helpers);
        std::set<std::uint64_t> rs(ra.helpers.begin(), ra.helpers.end());
        for (std::uint64_t c : info.united) CHECK(rs.count(c) == 1);
    }
}

TEST_CASE("explicit plans validate size, membership, and compulsory cover") {
    const EmsrCode& code = desk();
    RepairPlan base = plan_repair(code, 1);
    RepairPlan again = plan_repair(code, 1, base.helpers);
    CHECK(again.helpers == base.helpers);

    std::vector<std::uint64_t> short_list(base.helpers.begin(),
                                          base.helpers.end() - 1);
    CHECK_ERRC(plan_repair(code, 1, short_list), Errc::bad_plan_size);

    std::vector<std::uint64_t> with_failed = short_list;
    with_failed.push_back(1);
    CHECK_ERRC(plan_repair(code, 1, with_failed), Errc::bad_plan_size);

    std::vector<std::uint64_t> dup = short_list;
    dup.push_back(short_list.front());
    CHECK_ERRC(plan_repair(code, 1, dup), Errc::bad_plan_size);

    std::vector<std::uint64_t> oor = short_list;
    oor.push_back(26);
    CHECK_ERRC(plan_repair(code, 1, oor), Errc::bad_plan_size);

    // swap one compulsory helper for the free block it displaced
    CompulsoryInfo info = compulsory_sets(code, 1);
    std::uint64_t compulsory = info.united.front();
    std::uint64_t spare = base.non_contacted.front();
    std::vector<std::uint64_t> missing;
    for (std::uint64_t h : base.helpers)
        if (h != compulsory) missing.push_back(h);
    missing.push_back(spare);
    CHECK_ERRC(plan_repair(code, 1, missing), Errc::missing_compulsory);
}

TEST_CASE("interpolation matrix rows annihilate the failed block's points") {
    const EmsrCode& code = desk();
    const Field& f = code.inner.field;
    for (std::uint64_t failed : {std::uint64_t{1}, std::uint64_t{9}, std::uint64_t{25}})
        for (std::uint32_t j = 1; j <= code.outer.N; ++j) {
            Matrix p = interpolation_matrix(code, failed, j);
            CHECK(p.rows() == code.inner.r - code.inner.s);
            CHECK(p.cols() == code.inner.r);
            std::uint32_t a = code.column(failed, j);
            for (std::uint32_t d = 0; d < code.inner.s; ++d) {
                Fe root = f.mul(code.sigma[failed - 1], code.inner.lambda_at(a, d));
                for (std::size_t row = 0; row < p.rows(); ++row) {
                    Fe acc = 0, xp = 1;
                    for (std::size_t m = 0; m < p.cols(); ++m) {
                        acc = f.add(acc, f.mul(p.at(row, m), xp));
                        xp = f.mul(xp, root);
                    }
                    CHECK(acc == 0);
                }
            }
        }
}

TEST_CASE("repair restores every block exactly and meters bandwidth") {
    const EmsrCode& code = desk();
    const std::uint64_t ell = code.inner.ell;
    std::mt19937_64 rng(43);
    std::vector<Fe> msg =
        random_symbols(code.data_blocks() * code.block_len(), code.inner.field, rng);
    EmsrCodeword word = emsr_encode(code, msg);

    std::uint64_t global_max = 0;
    RepairWorkspace ws;
    for (std::uint64_t failed = 1; failed <= code.num_blocks(); ++failed) {
        EmsrCodeword damaged = word;
        damaged[failed - 1] = poison(code);
        RepairPlan plan = plan_repair(code, failed);
        RepairResult res = execute_repair(code, damaged, plan, ws);
        CHECK(res.block == word[failed - 1]);

        const BandwidthReport& rep = res.report;
        CHECK(rep.failed == failed);
        CHECK(rep.budget == doctest::Approx(96.0));
        CHECK(rep.per_helper.size() == code.contacted());
        std::uint64_t total = 0;
        for (const auto& [helper, symbols] : rep.per_helper) {
            std::uint32_t w = agreements(code, helper, failed);
            CHECK(symbols == w * ell + (code.outer.N - w) * ell / code.inner.s);
            CHECK(symbols <= rep.max_helper);
            total += symbols;
        }
        CHECK(rep.total == total);
        global_max = std::max(global_max, rep.max_helper);

        BandwidthCheck bw = bandwidth_check(rep, code);
        CHECK(bw.pass);
        CHECK(bw.hypothesis_holds);
        CHECK(!bw.epsilon_vacuous);
    }
    CHECK(global_max == 80);
}

TEST_CASE("repair never reads the failed block and ignores its content") {
    const EmsrCode& code = desk();
    EmsrCodeword zero(code.num_blocks(), Block(code.block_len(), 0));
    RepairPlan plan = plan_repair(code, 12);
    EmsrCodeword damaged = zero;
    damaged[11] = poison(code);
    RepairResult a = execute_repair(code, damaged, plan);
    for (Fe v : a.block) CHECK(v == 0);

    damaged[11] = Block(code.block_len(), 3);
    RepairResult b = execute_repair(code, damaged, plan);
    CHECK(a.block == b.block);
    CHECK(a.report.total == b.report.total);
    CHECK(a.report.max_helper == b.report.max_helper);
}

TEST_CASE("corrupted helpers yield a wrong block that verification rejects") {
    // group solves are exactly determined, so the minimum-bandwidth download
    // has no redundancy: corruption is absorbed, not detected, and the
    // damage stays confined to the corrupted coordinate's slice
    const EmsrCode& code = desk();
    EmsrCodeword zero(code.num_blocks(), Block(code.block_len(), 0));
    RepairPlan plan = plan_repair(code, 1);
    EmsrCodeword bad = zero;
    std::uint64_t culprit = plan.q_sets[0].front();
    bad[culprit - 1][0] = 5;
    RepairResult res = execute_repair(code, bad, plan);
    CHECK(res.block != Block(code.block_len(), 0));
    bool later_slices_clean = true;
    for (std::uint64_t x = code.inner.ell; x < code.block_len(); ++x)
        later_slices_clean = later_slices_clean && res.block[x] == 0;
    CHECK(later_slices_clean);
    EmsrCodeword patched = bad;
    patched[culprit - 1][0] = 0;
    patched[0] = res.block;
    CHECK(!emsr_verify(code, patched));
}

TEST_CASE("repair validates word shape") {
    const EmsrCode& code = desk();
    RepairPlan plan = plan_repair(code, 1);
    EmsrCodeword few(code.num_blocks() - 1, Block(code.block_len(), 0));
    CHECK_ERRC(execute_repair(code, few, plan), Errc::dimension_mismatch);
    EmsrCodeword ragged(code.num_blocks(), Block(code.block_len(), 0));
    ragged[5].pop_back();
    CHECK_ERRC(execute_repair(code, ragged, plan), Errc::dimension_mismatch);
}

TEST_CASE("bandwidth flags for tight, zero, and vacuous epsilon") {
    EmsrCode tight = build_emsr(Field(107), 5, 2, 3, 5, 4, 2, 0.0);
    CHECK(tight.helper_budget() == doctest::Approx(64.0));
    CHECK(!tight.delta_hypothesis_holds()); // needs delta >= 1, have 3/4
    CHECK(!tight.epsilon_vacuous());

    EmsrCodeword zero(tight.num_blocks(), Block(tight.block_len(), 0));
    RepairPlan plan = plan_repair(tight, 1);
    RepairResult res = execute_repair(tight, zero, plan);
    for (Fe v : res.block) CHECK(v == 0); // correctness unaffected
    BandwidthCheck bw = bandwidth_check(res.report, tight);
    CHECK(!bw.pass); // max 80 > budget 64
    CHECK(!bw.hypothesis_holds);
    CHECK(!bw.epsilon_vacuous);

    EmsrCode loose = build_emsr(Field(107), 5, 2, 3, 5, 4, 2, 1.0);
    CHECK(loose.epsilon_vacuous()); // (1+eps)/s == 1 admits whole blocks
    RepairResult res2 = execute_repair(loose, zero, plan_repair(loose, 1));
    BandwidthCheck bw2 = bandwidth_check(res2.report, loose);
    CHECK(bw2.pass);
    CHECK(bw2.epsilon_vacuous);
}

TEST_CASE("repair agrees with the MDS decoding oracle") {
    const EmsrCode& code = desk();
    std::mt19937_64 rng(44);
    for (int iter = 0; iter < 5; ++iter) {
        std::vector<Fe> msg = random_symbols(code.data_blocks() * code.block_len(),
                                             code.inner.field, rng);
        EmsrCodeword word = emsr_encode(code, msg);
        std::uint64_t failed = 1 + emsr_test::pick_below(rng, code.num_blocks());
        EmsrCodeword damaged = word;
        damaged[failed - 1] = poison(code);

        RepairResult res = execute_repair(code, damaged, plan_repair(code, failed));
        EmsrCodeword dec = emsr_decode_erasures(code, damaged, {failed});
        CHECK(res.block == dec[failed - 1]);
        CHECK(res.block == word[failed - 1]);
    }
}
