/*
 * repair_kernel.hpp -- shared per-group interpolation solve for repair.
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
#include <vector>

#include "emsr/gf.hpp"

namespace emsr::detail {

// Monic polynomial with the given roots; coefficients ascending by degree,
// size roots.size() + 1.
inline std::vector<Fe> poly_from_roots(const std::vector<Fe>& roots, const Field& f) {
    std::vector<Fe> c{1};
    for (Fe rt : roots) {
        std::vector<Fe> nc(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            nc[i + 1] = f.add(nc[i + 1], c[i]);
            nc[i] = f.sub(nc[i], f.mul(c[i], rt));
        }
        c = std::move(nc);
    }
    return c;
}

inline Fe poly_eval(const std::vector<Fe>& coeffs, Fe x, const Field& f) {
    Fe acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = f.add(f.mul(acc, x), coeffs[i]);
    return acc;
}

// Recovers one s-ary group during repair of a single block.
//
// The group's r parity equations have the form L1 + L2 + L3 = 0 where
//   L1[m] = sum_k roots[k]^m * failed_sym[k]          (the failed block)
//   L2[m] = qsum[m]                                   (agreeing blocks, known)
//   L3[m] = sum_v pts[v]^m * mu[v]                    (disagreeing blocks)
// and mu[v] is known only for contacted blocks. Multiplying by the
// annihilator rows P (coefficients of x^i * p0(x), p0 vanishing on roots)
// kills L1 and yields (r-s) equations that determine the unknown mu; the
// failed symbols then follow from the first s original equations, and the
// remaining r-s act as a consistency check.
//
// `mu` carries known values on entry (positions with known[v] != 0) and is
// fully populated on return. Returns the s failed symbols.
//
// Throws ScalarValidationBug when the mu-recovery system is singular (the
// scalar validation promises it never is) and InconsistentSystem when the
// surplus equations fail (the caller maps this to NotACodeword).
inline std::vector<Fe> solve_group(const Field& f, std::uint32_t r, std::uint32_t s,
                                   const std::vector<Fe>& roots,
                                   const std::vector<Fe>& p0,
                                   const std::vector<Fe>& qsum,
                                   const std::vector<Fe>& pts,
                                   std::vector<Fe>& mu,
                                   const std::vector<std::uint8_t>& known) {
    const std::uint32_t nunk = r - s;
    std::vector<std::size_t> unk;
    unk.reserve(nunk);
    for (std::size_t v = 0; v < known.size(); ++v)
        if (!known[v]) unk.push_back(v);
    if (unk.size() != nunk)
        raise(Errc::bad_plan_size, "group solve: unknown count mismatch");

    // y = P * L2: y[i] = sum_m p0[m] * qsum[i+m]
    std::vector<Fe> y(nunk, 0);
    for (std::uint32_t i = 0; i < nunk; ++i)
        for (std::size_t m = 0; m < p0.size(); ++m)
            y[i] = f.add(y[i], f.mul(p0[m], qsum[i + m]));

    // P*L3 column for block v is p0(pts[v]) * pts[v]^i; known columns move to
    // the right-hand side.
    Matrix a(nunk, nunk), b(nunk, 1);
    for (std::uint32_t i = 0; i < nunk; ++i) b.at(i, 0) = f.neg(y[i]);
    std::vector<Fe> p0v(pts.size());
    for (std::size_t v = 0; v < pts.size(); ++v) p0v[v] = poly_eval(p0, pts[v], f);
    for (std::uint32_t i = 0; i < nunk; ++i) {
        for (std::size_t v = 0; v < pts.size(); ++v) {
            Fe coef = f.mul(p0v[v], f.pow(pts[v], i));
            if (!known[v]) continue;
            b.at(i, 0) = f.sub(b.at(i, 0), f.mul(coef, mu[v]));
        }
        for (std::uint32_t u = 0; u < nunk; ++u)
            a.at(i, u) = f.mul(p0v[unk[u]], f.pow(pts[unk[u]], i));
    }
    Matrix x;
    try {
        x = mat_solve(a, b, f);
    } catch (const Error& e) {
        if (e.code() == Errc::singular_system)
            raise(Errc::scalar_validation_bug, "mu recovery system singular");
        throw;
    }
    for (std::uint32_t u = 0; u < nunk; ++u) mu[unk[u]] = x.at(u, 0);

    // Full L3, then L1 = -(L2 + L3).
    std::vector<Fe> rhs(r);
    for (std::uint32_t m = 0; m < r; ++m) {
        Fe l3 = 0;
        for (std::size_t v = 0; v < pts.size(); ++v)
            l3 = f.add(l3, f.mul(f.pow(pts[v], m), mu[v]));
        rhs[m] = f.neg(f.add(qsum[m], l3));
    }
    Matrix vand(s, s), vrhs(s, 1);
    for (std::uint32_t m = 0; m < s; ++m) {
        for (std::uint32_t kk = 0; kk < s; ++kk)
            vand.at(m, kk) = f.pow(roots[kk], m);
        vrhs.at(m, 0) = rhs[m];
    }
    Matrix sym = mat_solve(vand, vrhs, f);
    std::vector<Fe> out(s);
    for (std::uint32_t kk = 0; kk < s; ++kk) out[kk] = sym.at(kk, 0);

    for (std::uint32_t m = s; m < r; ++m) {
        Fe acc = 0;
        for (std::uint32_t kk = 0; kk < s; ++kk)
            acc = f.add(acc, f.mul(f.pow(roots[kk], m), out[kk]));
        if (acc != rhs[m])
            raise(Errc::inconsistent_system, "group solve: surplus parity rows violated");
    }
    return out;
}

} // namespace emsr::detail
