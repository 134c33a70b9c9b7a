/*
 * test_util.hpp -- shared doctest helpers.
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

#include <random>

#include <doctest.h>

#include "emsr/errors.hpp"
#include "emsr/gf.hpp"

// Asserts that `expr` throws emsr::Error with the given code.
#define CHECK_ERRC(expr, errc)                                                 \
    do {                                                                       \
        bool thrown_ = false;                                                  \
        try {                                                                  \
            (void)(expr);                                                      \
        } catch (const emsr::Error& e_) {                                      \
            thrown_ = true;                                                    \
            CHECK(e_.code() == (errc));                                        \
        }                                                                      \
        CHECK_MESSAGE(thrown_, "expected error " << emsr::errc_name(errc));    \
    } while (0)

namespace emsr_test {

inline emsr::Matrix random_matrix(std::size_t rows, std::size_t cols,
                                  const emsr::Field& f, std::mt19937_64& rng) {
    emsr::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.at(r, c) = static_cast<emsr::Fe>(rng() % f.modulus());
    return m;
}

inline std::vector<emsr::Fe> random_symbols(std::size_t count, const emsr::Field& f,
                                            std::mt19937_64& rng) {
    std::vector<emsr::Fe> v(count);
    for (auto& x : v) x = static_cast<emsr::Fe>(rng() % f.modulus());
    return v;
}

inline std::uint64_t pick_below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

} // namespace emsr_test
