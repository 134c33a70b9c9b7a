/*
 * cluster_sim.hpp -- simulated storage cluster: failure injection, repair
 * orchestration, bandwidth aggregation over trials.
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
#include <string>
#include <vector>

#include "emsr/emsr_code.hpp"

namespace emsr {

enum class FailurePolicy { round_robin, seeded_random };

struct SimConfig {
    std::uint32_t n = 0, k = 0, t = 0;
    std::uint32_t q = 0, N = 0, K = 0;
    double epsilon = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    FailurePolicy failure_policy = FailurePolicy::round_robin;
    FreePolicy free_policy = FreePolicy::ascending;
    std::string csv_path;  // optional
    std::string json_path; // optional
};

struct TrialReport {
    std::uint64_t trial = 0;
    std::uint64_t failed = 0;
    std::uint64_t contacted = 0;        // |P| = T
    std::uint64_t compulsory = 0;       // helper-only compulsory count
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_helper;
    std::uint64_t max_helper_symbols = 0;
    double budget_symbols = 0;
    bool pass = false;                  // bandwidth_check verdict
    std::uint64_t wall_time_us = 0;     // in-memory only, never serialized
};

struct SimReport {
    SimConfig config;
    std::uint32_t field_modulus = 0;
    std::vector<TrialReport> trials;
    std::uint64_t pass_count = 0;
    std::uint64_t fail_count = 0;
    std::uint64_t max_helper_symbols = 0;
    double mean_max_helper_symbols = 0;
    std::map<std::uint64_t, std::uint64_t> compulsory_histogram;
    bool hypothesis_holds = false;
    bool epsilon_vacuous = false;
};

// One shard slot per block plus a liveness flag. At most one failed node at
// a time; failing a node zeroes its shard, and reads of a dead slot throw,
// so a repair can never observe failed data.
class Cluster {
public:
    Cluster(EmsrCode code, const std::vector<Fe>& message);

    const EmsrCode& code() const noexcept { return code_; }

    // Throws SimulationFailure if another node is already down.
    void fail(std::uint64_t block);

    bool live(std::uint64_t block) const;
    std::uint64_t failed_block() const noexcept { return failed_; } // 0 if none

    // Access-guarded shard read; dead slot throws SimulationFailure.
    const Block& shard(std::uint64_t block) const;

    // Plans (default or explicit helpers), repairs from live shards only,
    // reinstalls the block and returns the result.
    RepairResult repair(FreePolicy policy = FreePolicy::ascending,
                        std::uint64_t seed = 0);
    RepairResult repair_with(const std::vector<std::uint64_t>& helpers);

private:
    RepairResult run_repair(const RepairPlan& plan);

    EmsrCode code_;
    EmsrCodeword shards_;
    std::vector<std::uint8_t> live_;
    std::uint64_t failed_ = 0;
};

// Builds the code (prime search), encodes a seeded random message, and runs
// fail/plan/repair/verify cycles. A repaired block differing from the
// pre-failure shard throws SimulationFailure naming the trial. Bandwidth
// failures do not throw; they lower pass flags and counters.
SimReport run_trials(const SimConfig& config);

} // namespace emsr
