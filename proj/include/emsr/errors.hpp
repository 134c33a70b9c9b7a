/*
 * errors.hpp -- error taxonomy shared by every module.
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

#include <stdexcept>
#include <string>

namespace emsr {

enum class Errc {
    inversion_of_zero,
    singular_system,
    inconsistent_system,
    index_out_of_range,
    invalid_parameters,
    dimension_mismatch,
    too_many_erasures,
    not_a_codeword,
    bad_helper_set,
    not_enough_evaluation_points,
    bound_inapplicable,
    invalid_u,
    field_too_small,
    missing_compulsory,
    bad_plan_size,
    scalar_validation_bug,
    simulation_failure,
    corrupt_shard,
    bad_config,
};

// Stable PascalCase name used in CLI error JSON and test assertions.
const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace emsr
