/*
 * cluster_sim.cpp -- simulated storage cluster.
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
#include "emsr/cluster_sim.hpp"

#include <chrono>

#include "rng.hpp"

namespace emsr {

Cluster::Cluster(EmsrCode code, const std::vector<Fe>& message)
    : code_(std::move(code)) {
    shards_ = emsr_encode(code_, message);
    live_.assign(code_.num_blocks() + 1, 1);
}

void Cluster::fail(std::uint64_t block) {
    if (block < 1 || block > code_.num_blocks())
        raise(Errc::index_out_of_range, "block index outside [1, M]");
    if (failed_ != 0)
        raise(Errc::simulation_failure, "a node is already down");
    failed_ = block;
    live_[block] = 0;
    shards_[block - 1].assign(code_.block_len(), 0);
}

bool Cluster::live(std::uint64_t block) const {
    if (block < 1 || block > code_.num_blocks())
        raise(Errc::index_out_of_range, "block index outside [1, M]");
    return live_[block] != 0;
}

const Block& Cluster::shard(std::uint64_t block) const {
    if (!live(block))
        raise(Errc::simulation_failure, "read of a failed shard slot");
    return shards_[block - 1];
}

RepairResult Cluster::run_repair(const RepairPlan& plan) {
    // Hand the repair engine only live shards; the failed slot stays empty.
    EmsrCodeword view(code_.num_blocks());
    for (std::uint64_t h : plan.helpers) view[h - 1] = shard(h);
    RepairResult result = execute_repair(code_, view, plan);
    shards_[failed_ - 1] = result.block;
    live_[failed_] = 1;
    failed_ = 0;
    return result;
}

RepairResult Cluster::repair(FreePolicy policy, std::uint64_t seed) {
    if (failed_ == 0)
        raise(Errc::simulation_failure, "no failed node to repair");
    return run_repair(plan_repair(code_, failed_, policy, seed));
}

RepairResult Cluster::repair_with(const std::vector<std::uint64_t>& helpers) {
    if (failed_ == 0)
        raise(Errc::simulation_failure, "no failed node to repair");
    return run_repair(plan_repair(code_, failed_, helpers));
}

SimReport run_trials(const SimConfig& config) {
    EmsrCode code = build_emsr_auto(config.n, config.k, config.t, config.q,
                                    config.N, config.K, config.epsilon);
    SimReport report;
    report.config = config;
    report.field_modulus = code.inner.field.modulus();
    report.hypothesis_holds = code.delta_hypothesis_holds();
    report.epsilon_vacuous = code.epsilon_vacuous();

    std::mt19937_64 msg_rng(config.seed);
    std::vector<Fe> message(code.data_blocks() * code.block_len());
    for (Fe& v : message)
        v = static_cast<Fe>(detail::rng_below(msg_rng, code.inner.field.modulus()));
    Cluster cluster(std::move(code), message);
    const EmsrCode& c = cluster.code();

    std::mt19937_64 fail_rng(config.seed + 1);
    std::mt19937_64 fill_rng(config.seed + 2);

    double sum_max = 0;
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        std::uint64_t victim =
            config.failure_policy == FailurePolicy::round_robin
                ? trial % c.num_blocks() + 1
                : detail::rng_below(fail_rng, c.num_blocks()) + 1;

        Block before = cluster.shard(victim);
        auto start = std::chrono::steady_clock::now();
        cluster.fail(victim);
        RepairResult res = cluster.repair(config.free_policy, fill_rng());
        auto stop = std::chrono::steady_clock::now();

        if (cluster.shard(victim) != before)
            raise(Errc::simulation_failure,
                  "repaired content mismatch at trial " + std::to_string(trial));

        CompulsoryInfo comp = compulsory_sets(c, victim);
        BandwidthCheck chk = bandwidth_check(res.report, c);

        TrialReport tr;
        tr.trial = trial;
        tr.failed = victim;
        tr.contacted = res.report.per_helper.size();
        tr.compulsory = comp.helper_count;
        tr.per_helper = res.report.per_helper;
        tr.max_helper_symbols = res.report.max_helper;
        tr.budget_symbols = res.report.budget;
        tr.pass = chk.pass;
        tr.wall_time_us = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count());

        report.pass_count += tr.pass;
        report.fail_count += !tr.pass;
        report.max_helper_symbols =
            std::max(report.max_helper_symbols, tr.max_helper_symbols);
        sum_max += static_cast<double>(tr.max_helper_symbols);
        ++report.compulsory_histogram[tr.compulsory];
        report.trials.push_back(std::move(tr));
    }
    if (config.trials > 0)
        report.mean_max_helper_symbols = sum_max / static_cast<double>(config.trials);
    return report;
}

} // namespace emsr
