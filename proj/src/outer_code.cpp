/*
 * outer_code.cpp -- outer linear code machinery.
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
#include "emsr/outer_code.hpp"

#include <cmath>
#include <limits>

namespace emsr {

namespace {

constexpr std::uint64_t kEnumerationCap = 1ull << 20;

} // namespace

OuterCode build_rs_outer(std::uint32_t q, std::uint32_t N, std::uint32_t K) {
    Field field(q); // validates primality
    if (N < 1 || K < 1 || K > N)
        raise(Errc::invalid_parameters, "need 1 <= K <= N");
    if (N > q)
        raise(Errc::not_enough_evaluation_points,
              "length exceeds the number of evaluation points");

    std::uint64_t M = 1;
    for (std::uint32_t d = 0; d < K; ++d) {
        M *= q;
        if (M > kEnumerationCap)
            raise(Errc::invalid_parameters, "q^K too large to enumerate");
    }

    OuterCode code{q, N, K, M, 0, field, {}, {}};
    code.generator.assign(K, std::vector<Fe>(N));
    for (std::uint32_t d = 0; d < K; ++d)
        for (std::uint32_t x = 0; x < N; ++x)
            code.generator[d][x] = field.pow(x, d);

    code.codewords.assign(M, std::vector<Fe>(N, 0));
    for (std::uint64_t m = 0; m < M; ++m) {
        std::uint64_t rem = m;
        for (std::uint32_t d = 0; d < K; ++d) {
            Fe digit = static_cast<Fe>(rem % q);
            rem /= q;
            if (digit == 0) continue;
            for (std::uint32_t x = 0; x < N; ++x)
                code.codewords[m][x] =
                    field.add(code.codewords[m][x], field.mul(digit, code.generator[d][x]));
        }
    }

    std::uint32_t dmin = N + 1;
    for (std::uint64_t m = 1; m < M; ++m) {
        std::uint32_t w = 0;
        for (Fe v : code.codewords[m]) w += v != 0;
        if (w < dmin) dmin = w;
    }
    code.D = dmin;
    return code;
}

std::uint64_t full_weight_count(const OuterCode& code) {
    std::uint64_t w = 0;
    for (const auto& cw : code.codewords) {
        bool full = true;
        for (Fe v : cw)
            if (v == 0) { full = false; break; }
        w += full;
    }
    return w;
}

namespace {

using I128 = __int128;

I128 binom(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    I128 acc = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > (I128(1) << 100))
            raise(Errc::invalid_parameters, "bound term overflow");
    }
    return acc;
}

I128 ipow(std::uint32_t base, std::uint32_t e) {
    I128 acc = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        acc *= base;
        if (acc > (I128(1) << 100))
            raise(Errc::invalid_parameters, "bound term overflow");
    }
    return acc;
}

} // namespace

std::int64_t fw_lower_bound(std::uint32_t N, std::uint32_t K, std::uint32_t g,
                            std::uint32_t q) {
    if (g > K)
        raise(Errc::invalid_parameters, "need 0 <= g <= K");
    if (q < 2)
        raise(Errc::invalid_parameters, "alphabet size must be >= 2");
    // Ratio condition that makes the alternating tail monotone:
    // q > (N - (K-g+1)) / (K-g+2), i.e. q*(K-g+2) > N - (K-g+1).
    std::uint64_t m = K - g + 1;
    std::uint64_t lhs = static_cast<std::uint64_t>(q) * (m + 1);
    std::uint64_t rhs = N > m ? N - m : 0;
    if (!(lhs > rhs))
        raise(Errc::bound_inapplicable, "ratio condition violated");

    I128 acc = 0;
    for (std::uint32_t p = 0; p + g <= K; ++p) {
        I128 term = binom(N, p) * ipow(q, K - p);
        acc += (p % 2 == 0) ? term : -term;
    }
    acc -= binom(N, static_cast<std::uint32_t>(m)) * ipow(q, g);
    if (acc > std::numeric_limits<std::int64_t>::max() ||
        acc < std::numeric_limits<std::int64_t>::min())
        raise(Errc::invalid_parameters, "bound exceeds 64-bit range");
    return static_cast<std::int64_t>(acc);
}

PlanParams ag_plan(std::uint32_t r, double epsilon, std::uint32_t u) {
    if (u <= 3)
        raise(Errc::invalid_u, "need u > 3");
    if (r < 2)
        raise(Errc::invalid_parameters, "need r >= 2");
    if (!(epsilon > 0))
        raise(Errc::invalid_parameters, "need eps > 0");

    PlanParams plan;
    plan.r = r;
    plan.epsilon = epsilon;
    plan.u = u;
    plan.threshold = 2.0 * (u + 1.0) * (u + 1.0) * r * r / (epsilon * epsilon);
    if (!std::isfinite(plan.threshold) || plan.threshold > 9e18)
        raise(Errc::invalid_parameters, "threshold out of range");

    // Smallest prime whose square strictly exceeds the threshold.
    auto is_prime = [](std::uint64_t x) {
        if (x < 2) return false;
        for (std::uint64_t d = 2; d * d <= x; ++d)
            if (x % d == 0) return false;
        return true;
    };
    std::uint64_t p = 2;
    while (!(is_prime(p) && static_cast<long double>(p) * p > plan.threshold)) ++p;
    plan.q_min_root = static_cast<std::uint32_t>(p);
    plan.q_min = p * p;

    plan.delta_min = 1.0 - epsilon / (r - 1.0);
    plan.genus_ratio = 1.0 / (std::sqrt(static_cast<double>(plan.q_min)) - 1.0);
    plan.k_rule = "K = u*g (outer dimension u times the curve genus)";
    plan.tprime_exponent = (u - 1.0) / u;
    plan.tprime_rule =
        "compulsory helpers <= total_blocks - total_blocks^((u-1)/u)";
    plan.subpacketization_note =
        "per-block symbol count N*s^q grows as O(log(total_blocks))";
    plan.field_size_note =
        "base field size stays O(total_blocks) for the family";
    return plan;
}

} // namespace emsr
