/*
 * gf.cpp -- prime-field arithmetic and dense matrix algebra.
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
#include "emsr/gf.hpp"

namespace emsr {

const char* errc_name(Errc c) noexcept {
    switch (c) {
    case Errc::inversion_of_zero: return "InversionOfZero";
    case Errc::singular_system: return "SingularSystem";
    case Errc::inconsistent_system: return "InconsistentSystem";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::invalid_parameters: return "InvalidParameters";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::too_many_erasures: return "TooManyErasures";
    case Errc::not_a_codeword: return "NotACodeword";
    case Errc::bad_helper_set: return "BadHelperSet";
    case Errc::not_enough_evaluation_points: return "NotEnoughEvaluationPoints";
    case Errc::bound_inapplicable: return "BoundInapplicable";
    case Errc::invalid_u: return "InvalidU";
    case Errc::field_too_small: return "FieldTooSmall";
    case Errc::missing_compulsory: return "MissingCompulsory";
    case Errc::bad_plan_size: return "BadPlanSize";
    case Errc::scalar_validation_bug: return "ScalarValidationBug";
    case Errc::simulation_failure: return "SimulationFailure";
    case Errc::corrupt_shard: return "CorruptShard";
    case Errc::bad_config: return "BadConfig";
    }
    return "Unknown";
}

namespace {

bool is_prime_u32(std::uint32_t x) {
    if (x < 2) return false;
    for (std::uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

} // namespace

Field::Field(std::uint32_t p) : p_(p) {
    if (p >= (1u << 31))
        raise(Errc::invalid_parameters, "field modulus must be < 2^31");
    if (!is_prime_u32(p))
        raise(Errc::invalid_parameters, "field modulus must be prime");
}

Fe Field::pow(Fe a, std::uint64_t e) const noexcept {
    std::uint64_t base = a % p_, acc = 1;
    while (e) {
        if (e & 1) acc = acc * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return static_cast<Fe>(acc);
}

Fe ff_inv(Fe a, const Field& f) {
    if (a % f.modulus() == 0)
        raise(Errc::inversion_of_zero, "inverse of zero");
    return f.pow(a, f.modulus() - 2);
}

Matrix mat_mul(const Matrix& a, const Matrix& b, const Field& f) {
    if (a.cols() != b.rows())
        raise(Errc::dimension_mismatch, "mat_mul shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Fe aik = a.at(i, k);
            if (aik == 0) continue;
            const Fe* brow = b.row(k);
            Fe* orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] = f.add(orow[j], f.mul(aik, brow[j]));
        }
    }
    return out;
}

namespace {

// In-place row echelon. Pivoting picks the first nonzero entry scanning down
// each column, so results are deterministic across platforms. Returns the
// pivot columns of the first `limit_cols` columns.
std::vector<std::size_t> eliminate(Matrix& m, const Field& f, std::size_t limit_cols) {
    std::vector<std::size_t> pivots;
    std::size_t prow = 0;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t c = 0; c < limit_cols && prow < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t r = prow; r < rows; ++r) {
            if (m.at(r, c) != 0) { sel = r; break; }
        }
        if (sel == rows) continue;
        if (sel != prow) {
            Fe* a = m.row(prow);
            Fe* b = m.row(sel);
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[j], b[j]);
        }
        Fe inv = ff_inv(m.at(prow, c), f);
        Fe* prowp = m.row(prow);
        for (std::size_t j = c; j < cols; ++j) prowp[j] = f.mul(prowp[j], inv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == prow) continue;
            Fe factor = m.at(r, c);
            if (factor == 0) continue;
            Fe* rr = m.row(r);
            std::uint64_t fneg = f.modulus() - factor;
            std::uint64_t p = f.modulus();
            for (std::size_t j = c; j < cols; ++j)
                rr[j] = static_cast<Fe>((rr[j] + fneg * prowp[j]) % p);
        }
        pivots.push_back(c);
        ++prow;
    }
    return pivots;
}

} // namespace

std::size_t mat_rank(Matrix m, const Field& f) {
    return eliminate(m, f, m.cols()).size();
}

namespace {

Matrix solve_common(const Matrix& a, const Matrix& b, const Field& f, bool square) {
    if (a.rows() != b.rows())
        raise(Errc::dimension_mismatch, "solve: row counts differ");
    if (square && a.rows() != a.cols())
        raise(Errc::dimension_mismatch, "solve: matrix not square");
    if (a.rows() < a.cols())
        raise(Errc::dimension_mismatch, "solve: underdetermined system");

    const std::size_t n = a.cols(), rhs = b.cols();
    Matrix aug(a.rows(), n + rhs);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = a.at(r, c);
        for (std::size_t c = 0; c < rhs; ++c) aug.at(r, n + c) = b.at(r, c);
    }
    std::vector<std::size_t> pivots = eliminate(aug, f, n);
    if (pivots.size() != n)
        raise(Errc::singular_system, "solve: coefficient matrix rank-deficient");
    for (std::size_t r = n; r < aug.rows(); ++r)
        for (std::size_t c = 0; c < rhs; ++c)
            if (aug.at(r, n + c) != 0)
                raise(Errc::inconsistent_system, "solve: surplus equations inconsistent");
    Matrix x(n, rhs);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < rhs; ++c)
            x.at(r, c) = aug.at(r, n + c);
    return x;
}

} // namespace

Matrix mat_solve(const Matrix& a, const Matrix& b, const Field& f) {
    return solve_common(a, b, f, true);
}

Matrix mat_solve_overdetermined(const Matrix& a, const Matrix& b, const Field& f) {
    return solve_common(a, b, f, false);
}

} // namespace emsr
