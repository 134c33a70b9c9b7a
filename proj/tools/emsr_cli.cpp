/*
 * emsr_cli.cpp -- command-line surface: build codes, encode files into
 * shards, fail/repair blocks, decode, verify, count, plan, simulate.
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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emsr/cluster_sim.hpp"
#include "emsr/emsr_code.hpp"
#include "emsr/shard_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Paths {
    std::string code = "emsr_code.json";
    std::string shard_dir = "shards";
};

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        emsr::raise(emsr::Errc::bad_config, "cannot open input file: " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out.good())
        emsr::raise(emsr::Errc::bad_config, "cannot write output file: " + path);
}

// Cross-checks a shard header against the active code descriptor.
void check_header(const emsr::ShardHeader& h, const emsr::EmsrCode& code,
                  std::uint64_t block) {
    const emsr::InnerMsrCode& in = code.inner;
    const emsr::OuterCode& out = code.outer;
    bool ok = h.p == in.field.modulus() && h.n == in.n && h.k == in.k &&
              h.t == in.t && h.q == out.q && h.N == out.N && h.K == out.K &&
              h.block == block;
    if (!ok)
        emsr::raise(emsr::Errc::corrupt_shard,
                    "shard header does not match the code descriptor");
    if (h.payload_len == 0 || h.payload_len % code.block_len() != 0)
        emsr::raise(emsr::Errc::corrupt_shard,
                    "shard payload is not a whole number of stripes");
}

// Loads every shard present in the directory, validating headers and a
// uniform stripe count. Returns block -> payload (stripes * L symbols each).
std::map<std::uint64_t, std::vector<emsr::Fe>>
load_present_shards(const Paths& paths, const emsr::EmsrCode& code,
                    std::uint64_t& stripes) {
    std::map<std::uint64_t, std::vector<emsr::Fe>> shards;
    stripes = 0;
    for (std::uint64_t i = 1; i <= code.num_blocks(); ++i) {
        std::string path = emsr::shard_path(paths.shard_dir, i);
        if (!fs::exists(path)) continue;
        emsr::LoadedShard loaded = emsr::read_shard(path);
        check_header(loaded.header, code, i);
        std::uint64_t st = loaded.header.payload_len / code.block_len();
        if (stripes == 0) stripes = st;
        if (st != stripes)
            emsr::raise(emsr::Errc::corrupt_shard,
                        "shards disagree on stripe count");
        shards.emplace(i, std::move(loaded.payload));
    }
    if (shards.empty())
        emsr::raise(emsr::Errc::corrupt_shard,
                    "no shard files in " + paths.shard_dir);
    return shards;
}

// One stripe of a stored codeword; absent blocks are zero slots the caller
// has declared erased or non-contacted, never read as data.
emsr::EmsrCodeword
stripe_view(const emsr::EmsrCode& code,
            const std::map<std::uint64_t, std::vector<emsr::Fe>>& shards,
            std::uint64_t stripe) {
    const std::uint64_t L = code.block_len();
    emsr::EmsrCodeword word(code.num_blocks(), emsr::Block(L, 0));
    for (const auto& [block, payload] : shards)
        word[block - 1].assign(payload.begin() + stripe * L,
                               payload.begin() + (stripe + 1) * L);
    return word;
}

int cmd_build(const Paths& paths, std::uint32_t n, std::uint32_t k,
              std::uint32_t t, std::uint32_t q, std::uint32_t N,
              std::uint32_t K, double eps) {
    emsr::EmsrCode code = emsr::build_emsr_auto(n, k, t, q, N, K, eps);
    emsr::write_descriptor(paths.code, code);
    emit(json{{"descriptor", paths.code},
              {"p", code.inner.field.modulus()},
              {"blocks", code.num_blocks()},
              {"data_blocks", code.data_blocks()},
              {"contacted", code.contacted()},
              {"block_symbols", code.block_len()},
              {"helper_budget_symbols", code.helper_budget()},
              {"delta", code.delta()},
              {"delta_hypothesis_holds", code.delta_hypothesis_holds()},
              {"epsilon_vacuous", code.epsilon_vacuous()}});
    return 0;
}

int cmd_encode(const Paths& paths, const std::string& input) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    std::vector<std::uint8_t> bytes = read_file_bytes(input);
    emsr::FileFraming framing = emsr::plan_framing(code, bytes.size());
    std::vector<emsr::Fe> message = emsr::pack_file(code, bytes, framing);

    const std::uint64_t L = code.block_len();
    const std::uint64_t M = code.num_blocks();
    const std::uint64_t data = code.data_blocks();
    std::vector<std::vector<emsr::Fe>> payloads(M);
    for (auto& p : payloads) p.reserve(framing.stripes * L);
    for (std::uint64_t s = 0; s < framing.stripes; ++s) {
        std::vector<emsr::Fe> slice(message.begin() + s * data * L,
                                    message.begin() + (s + 1) * data * L);
        emsr::EmsrCodeword word = emsr::emsr_encode(code, slice);
        for (std::uint64_t i = 0; i < M; ++i)
            payloads[i].insert(payloads[i].end(), word[i].begin(), word[i].end());
    }

    fs::create_directories(paths.shard_dir);
    for (std::uint64_t i = 1; i <= M; ++i) {
        emsr::ShardHeader hdr = emsr::make_shard_header(code, i, payloads[i - 1].size());
        emsr::write_shard(emsr::shard_path(paths.shard_dir, i), hdr, payloads[i - 1]);
    }
    emit(json{{"input", input},
              {"bytes", bytes.size()},
              {"stripes", framing.stripes},
              {"bits_per_symbol", framing.bits_per_symbol},
              {"shards", M},
              {"shard_dir", paths.shard_dir}});
    return 0;
}

int cmd_fail(const Paths& paths, std::uint64_t block) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    if (block < 1 || block > code.num_blocks())
        emsr::raise(emsr::Errc::bad_config, "block index out of range");
    std::string path = emsr::shard_path(paths.shard_dir, block);
    if (!fs::exists(path))
        emsr::raise(emsr::Errc::simulation_failure,
                    "block " + std::to_string(block) + " is already missing");
    fs::remove(path);
    emit(json{{"failed", block}, {"removed", path}});
    return 0;
}

int cmd_repair(const Paths& paths, std::uint64_t block,
               const std::vector<std::uint64_t>& helpers) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    if (block < 1 || block > code.num_blocks())
        emsr::raise(emsr::Errc::bad_config, "block index out of range");

    std::uint64_t stripes = 0;
    auto shards = load_present_shards(paths, code, stripes);
    shards.erase(block); // never read the failed block's data

    emsr::RepairPlan plan;
    if (!helpers.empty()) {
        plan = emsr::plan_repair(code, block, helpers);
    } else if (shards.size() == code.num_blocks() - 1) {
        plan = emsr::plan_repair(code, block);
    } else {
        // degraded pool: compulsory blocks first, then available spares
        emsr::CompulsoryInfo info = emsr::compulsory_sets(code, block);
        std::vector<std::uint64_t> pool = info.united;
        std::set<std::uint64_t> used(pool.begin(), pool.end());
        for (const auto& [i, payload] : shards) {
            (void)payload;
            if (pool.size() == code.contacted()) break;
            if (used.insert(i).second) pool.push_back(i);
        }
        plan = emsr::plan_repair(code, block, pool);
    }
    for (std::uint64_t h : plan.helpers)
        if (!shards.count(h))
            emsr::raise(emsr::Errc::bad_helper_set,
                        "helper shard " + std::to_string(h) + " is missing");

    const std::uint64_t L = code.block_len();
    std::vector<emsr::Fe> payload;
    payload.reserve(stripes * L);
    emsr::BandwidthReport rep;
    emsr::RepairWorkspace ws;
    for (std::uint64_t s = 0; s < stripes; ++s) {
        emsr::EmsrCodeword word = stripe_view(code, shards, s);
        emsr::RepairResult res = emsr::execute_repair(code, word, plan, ws);
        payload.insert(payload.end(), res.block.begin(), res.block.end());
        rep = res.report; // identical across stripes: bandwidth is content-free
    }
    emsr::ShardHeader hdr = emsr::make_shard_header(code, block, payload.size());
    emsr::write_shard(emsr::shard_path(paths.shard_dir, block), hdr, payload);

    emsr::BandwidthCheck bw = emsr::bandwidth_check(rep, code);
    json per_helper = json::array();
    for (const auto& [helper, symbols] : rep.per_helper)
        per_helper.push_back(json{{"block", helper}, {"symbols", symbols}});
    emit(json{{"failed", block},
              {"helpers", plan.helpers.size()},
              {"stripes", stripes},
              {"budget_symbols", rep.budget},
              {"max_helper_symbols", rep.max_helper},
              {"total_symbols", rep.total},
              {"max_helper_symbols_all_stripes", rep.max_helper * stripes},
              {"total_symbols_all_stripes", rep.total * stripes},
              {"bandwidth_pass", bw.pass},
              {"hypothesis_holds", bw.hypothesis_holds},
              {"epsilon_vacuous", bw.epsilon_vacuous},
              {"per_helper", per_helper}});
    return 0;
}

int cmd_decode(const Paths& paths, const std::string& output) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    std::uint64_t stripes = 0;
    auto shards = load_present_shards(paths, code, stripes);

    std::set<std::uint64_t> erased;
    for (std::uint64_t i = 1; i <= code.num_blocks(); ++i)
        if (!shards.count(i)) erased.insert(i);

    const std::uint64_t L = code.block_len();
    std::vector<emsr::Fe> message;
    message.reserve(stripes * code.data_blocks() * L);
    for (std::uint64_t s = 0; s < stripes; ++s) {
        emsr::EmsrCodeword word = stripe_view(code, shards, s);
        emsr::EmsrCodeword full = emsr::emsr_decode_erasures(code, word, erased);
        for (std::uint64_t i = 0; i < code.data_blocks(); ++i)
            message.insert(message.end(), full[i].begin(), full[i].end());
    }
    std::vector<std::uint8_t> bytes = emsr::unpack_file(code, message);
    write_file_bytes(output, bytes);
    emit(json{{"output", output},
              {"bytes", bytes.size()},
              {"stripes", stripes},
              {"erased_blocks", json(erased)}});
    return 0;
}

int cmd_verify_mds(const Paths& paths, bool exhaustive, std::uint64_t samples,
                   std::uint64_t seed) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    emsr::MdsReport rep = emsr::mds_check(code, exhaustive, samples, seed);
    json doc{{"mode", exhaustive ? "exhaustive" : "sample"},
             {"checked", rep.checked},
             {"pass", rep.pass}};
    if (rep.witness)
        doc["witness"] = json{{"blocks", rep.witness->blocks},
                              {"coordinate", rep.witness->coordinate}};
    emit(doc);
    return rep.pass ? 0 : 1;
}

int cmd_count_full_weight(const Paths& paths) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    std::uint64_t w = emsr::full_weight_count(code.outer);
    emit(json{{"full_weight_codewords", w},
              {"blocks", code.num_blocks()},
              {"compulsory_inclusive_bound", code.num_blocks() - w}});
    return 0;
}

int cmd_fw_bound(const Paths& paths, std::uint32_t genus) {
    emsr::EmsrCode code = emsr::read_descriptor(paths.code);
    const emsr::OuterCode& out = code.outer;
    std::int64_t bound = emsr::fw_lower_bound(out.N, out.K, genus, out.q);
    std::uint64_t exact = emsr::full_weight_count(out);
    emit(json{{"genus", genus},
              {"q", out.q},
              {"N", out.N},
              {"K", out.K},
              {"bound", bound},
              {"exact", exact}});
    return 0;
}

int cmd_plan_ag(std::uint32_t r, double eps, std::uint32_t u) {
    emsr::PlanParams plan = emsr::ag_plan(r, eps, u);
    emit(json{{"r", plan.r},
              {"epsilon", plan.epsilon},
              {"u", plan.u},
              {"threshold", plan.threshold},
              {"q_min", plan.q_min},
              {"q_min_root", plan.q_min_root},
              {"delta_min", plan.delta_min},
              {"genus_ratio", plan.genus_ratio},
              {"k_rule", plan.k_rule},
              {"tprime_exponent", plan.tprime_exponent},
              {"tprime_rule", plan.tprime_rule},
              {"subpacketization", plan.subpacketization_note},
              {"field_size", plan.field_size_note}});
    return 0;
}

int cmd_simulate(const std::string& config_path) {
    std::vector<std::uint8_t> raw = read_file_bytes(config_path);
    emsr::SimConfig cfg =
        emsr::parse_sim_config(std::string(raw.begin(), raw.end()));
    emsr::SimReport rep = emsr::run_trials(cfg);
    if (!cfg.csv_path.empty()) {
        std::string csv = emsr::sim_report_csv(rep);
        write_file_bytes(cfg.csv_path,
                         std::vector<std::uint8_t>(csv.begin(), csv.end()));
    }
    if (!cfg.json_path.empty()) {
        std::string js = emsr::sim_report_json(rep);
        write_file_bytes(cfg.json_path,
                         std::vector<std::uint8_t>(js.begin(), js.end()));
    }
    emit(json{{"trials", rep.trials.size()},
              {"pass_count", rep.pass_count},
              {"fail_count", rep.fail_count},
              {"field_modulus", rep.field_modulus},
              {"max_helper_symbols", rep.max_helper_symbols},
              {"mean_max_helper_symbols", rep.mean_max_helper_symbols},
              {"hypothesis_holds", rep.hypothesis_holds},
              {"epsilon_vacuous", rep.epsilon_vacuous}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-MSR erasure coding: build, encode, repair, analyze"};
    app.require_subcommand(1);
    app.fallthrough(); // global --code/--shard-dir may follow the subcommand

    Paths paths;
    app.add_option("--code", paths.code, "code descriptor path")
        ->capture_default_str();
    app.add_option("--shard-dir", paths.shard_dir, "shard directory")
        ->capture_default_str();

    std::uint32_t n = 5, k = 2, t = 3, q = 5, N = 4, K = 2;
    double eps = 0.5;
    CLI::App* build = app.add_subcommand("build", "construct a code and write its descriptor");
    build->add_option("--n", n, "storage nodes per inner code")->capture_default_str();
    build->add_option("--k", k, "inner data nodes")->capture_default_str();
    build->add_option("--t", t, "inner helpers contacted")->capture_default_str();
    build->add_option("--q", q, "outer alphabet size (prime)")->capture_default_str();
    build->add_option("--N", N, "outer code length")->capture_default_str();
    build->add_option("--K", K, "outer code dimension")->capture_default_str();
    build->add_option("--eps", eps, "bandwidth slack epsilon")->capture_default_str();

    std::string input;
    CLI::App* encode = app.add_subcommand("encode", "encode a file into shards");
    encode->add_option("file", input, "input file")->required();

    std::uint64_t fail_block = 0;
    CLI::App* fail = app.add_subcommand("fail", "remove a block's shard");
    fail->add_option("block", fail_block, "block index (1-based)")->required();

    std::uint64_t repair_block = 0;
    std::vector<std::uint64_t> helpers;
    CLI::App* repair = app.add_subcommand("repair", "repair a block from helpers");
    repair->add_option("block", repair_block, "block index (1-based)")->required();
    repair->add_option("--helpers", helpers, "explicit contacted set");

    std::string output = "decoded.bin";
    CLI::App* decode = app.add_subcommand("decode", "reconstruct the file from shards");
    decode->add_option("--out", output, "output path")->capture_default_str();

    bool exhaustive = false;
    std::uint64_t samples = 0, seed = 0;
    CLI::App* verify = app.add_subcommand("verify-mds", "check the erasure-tolerance criterion");
    CLI::Option* opt_ex = verify->add_flag("--exhaustive", exhaustive, "sweep all subsets");
    CLI::Option* opt_sm = verify->add_option("--sample", samples, "random subsets to draw");
    verify->add_option("--seed", seed, "sampling seed")->capture_default_str();
    opt_ex->excludes(opt_sm);

    app.add_subcommand("count-full-weight", "count outer codewords with no zero coordinate");

    std::uint32_t genus = 0;
    CLI::App* fwb = app.add_subcommand("fw-bound", "lower-bound the full-weight count");
    fwb->add_option("--genus", genus, "genus parameter g")->required();

    std::uint32_t pr = 0, pu = 0;
    double peps = 0;
    CLI::App* plan = app.add_subcommand("plan-ag", "plan an asymptotic family instance");
    plan->add_option("--r", pr, "parities r")->required();
    plan->add_option("--eps", peps, "bandwidth slack epsilon")->required();
    plan->add_option("--u", pu, "tower parameter u")->required();

    std::string config_path;
    CLI::App* sim = app.add_subcommand("simulate", "run failure/repair trials");
    sim->add_option("--config", config_path, "RunConfig JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << json{{"error", "BadConfig"}, {"message", e.what()}}.dump()
                  << "\n";
        return e.get_exit_code();
    }

    try {
        if (build->parsed()) return cmd_build(paths, n, k, t, q, N, K, eps);
        if (encode->parsed()) return cmd_encode(paths, input);
        if (fail->parsed()) return cmd_fail(paths, fail_block);
        if (repair->parsed()) return cmd_repair(paths, repair_block, helpers);
        if (decode->parsed()) return cmd_decode(paths, output);
        if (verify->parsed())
            return cmd_verify_mds(paths, exhaustive || samples == 0, samples, seed);
        if (app.get_subcommand("count-full-weight")->parsed())
            return cmd_count_full_weight(paths);
        if (fwb->parsed()) return cmd_fw_bound(paths, genus);
        if (plan->parsed()) return cmd_plan_ag(pr, peps, pu);
        if (sim->parsed()) return cmd_simulate(config_path);
    } catch (const emsr::Error& e) {
        std::cerr << json{{"error", emsr::errc_name(e.code())},
                          {"message", e.what()}}
                         .dump()
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    }
    return 0;
}
