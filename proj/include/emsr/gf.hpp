/*
 * gf.hpp -- prime-field arithmetic and dense matrix algebra.
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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emsr/errors.hpp"

namespace emsr {

// Field element, canonical representative in [0, p). p < 2^31 keeps every
// product of two elements inside uint64_t.
using Fe = std::uint32_t;

class Field {
public:
    // Throws InvalidParameters unless p is prime and 2 <= p < 2^31.
    explicit Field(std::uint32_t p);

    std::uint32_t modulus() const noexcept { return p_; }

    Fe add(Fe a, Fe b) const noexcept {
        std::uint32_t s = a + b; // a, b < p < 2^31: no overflow
        return s >= p_ ? s - p_ : s;
    }
    Fe sub(Fe a, Fe b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Fe neg(Fe a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Fe mul(Fe a, Fe b) const noexcept {
        return static_cast<Fe>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Fe pow(Fe a, std::uint64_t e) const noexcept;
    Fe reduce(std::uint64_t v) const noexcept { return static_cast<Fe>(v % p_); }

    bool operator==(const Field& o) const noexcept { return p_ == o.p_; }

private:
    std::uint32_t p_;
};

// Multiplicative inverse. Throws InversionOfZero for a = 0.
Fe ff_inv(Fe a, const Field& f);

// Dense row-major matrix of field elements.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Fe& at(std::size_t r, std::size_t c) {
        check(r, c);
        return e_[r * cols_ + c];
    }
    Fe at(std::size_t r, std::size_t c) const {
        check(r, c);
        return e_[r * cols_ + c];
    }

    Fe* row(std::size_t r) noexcept { return e_.data() + r * cols_; }
    const Fe* row(std::size_t r) const noexcept { return e_.data() + r * cols_; }

    bool operator==(const Matrix& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            raise(Errc::index_out_of_range, "matrix index out of range");
    }

    std::size_t rows_, cols_;
    std::vector<Fe> e_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b, const Field& f);

// Rank by Gaussian elimination with first-nonzero pivoting (deterministic).
std::size_t mat_rank(Matrix m, const Field& f);

// Solves a*x = b for square full-rank a. Throws SingularSystem otherwise,
// DimensionMismatch if shapes disagree.
Matrix mat_solve(const Matrix& a, const Matrix& b, const Field& f);

// Solves a*x = b where a has rows >= cols and full column rank; surplus rows
// must be consistent. Throws SingularSystem on rank deficiency and
// InconsistentSystem when the surplus equations contradict the solution.
Matrix mat_solve_overdetermined(const Matrix& a, const Matrix& b, const Field& f);

} // namespace emsr
