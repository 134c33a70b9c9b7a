/*
 * shard_io.cpp -- shard files, descriptors, framing, report serialization.
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
#include "emsr/shard_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace emsr {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'E', 'M', 'S', 'R'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t off) {
    return static_cast<std::uint8_t>(in[off]) |
           static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[off + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[off + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[off + 3])) << 24;
}

std::string format_budget(double budget) {
    if (budget == std::floor(budget) && budget >= 0 && budget < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%llu",
                      static_cast<unsigned long long>(budget));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", budget);
    return buf;
}

} // namespace

ShardHeader make_shard_header(const EmsrCode& code, std::uint64_t block,
                              std::uint64_t payload_len) {
    ShardHeader h;
    h.p = code.inner.field.modulus();
    h.n = code.inner.n;
    h.k = code.inner.k;
    h.t = code.inner.t;
    h.q = code.outer.q;
    h.N = code.outer.N;
    h.K = code.outer.K;
    h.block = static_cast<std::uint32_t>(block);
    h.payload_len = static_cast<std::uint32_t>(payload_len);
    return h;
}

void write_shard(const std::string& path, const ShardHeader& header,
                 const std::vector<Fe>& payload) {
    if (payload.size() != header.payload_len)
        raise(Errc::dimension_mismatch, "payload length disagrees with header");
    std::string out;
    out.reserve(41 + payload.size() * 4);
    out.append(kMagic, 4);
    out.push_back(static_cast<char>(kVersion));
    for (std::uint32_t v : {header.p, header.n, header.k, header.t, header.q,
                            header.N, header.K, header.block, header.payload_len})
        put_u32(out, v);
    for (Fe sym : payload) put_u32(out, sym);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        raise(Errc::bad_config, "cannot open shard file for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f)
        raise(Errc::bad_config, "short write to shard file: " + path);
}

LoadedShard read_shard(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        raise(Errc::corrupt_shard, "cannot open shard file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string data = ss.str();
    if (data.size() < 41)
        raise(Errc::corrupt_shard, "shard file truncated: " + path);
    if (std::string(data, 0, 4) != std::string(kMagic, 4))
        raise(Errc::corrupt_shard, "bad magic: " + path);
    if (static_cast<std::uint8_t>(data[4]) != kVersion)
        raise(Errc::corrupt_shard, "unsupported shard version: " + path);
    LoadedShard shard;
    std::uint32_t* fields[] = {&shard.header.p, &shard.header.n, &shard.header.k,
                               &shard.header.t, &shard.header.q, &shard.header.N,
                               &shard.header.K, &shard.header.block,
                               &shard.header.payload_len};
    std::size_t off = 5;
    for (std::uint32_t* fld : fields) {
        *fld = get_u32(data, off);
        off += 4;
    }
    if (data.size() != 41 + static_cast<std::size_t>(shard.header.payload_len) * 4)
        raise(Errc::corrupt_shard, "payload size disagrees with header: " + path);
    shard.payload.resize(shard.header.payload_len);
    for (std::size_t i = 0; i < shard.payload.size(); ++i) {
        shard.payload[i] = get_u32(data, off);
        off += 4;
        if (shard.payload[i] >= shard.header.p)
            raise(Errc::corrupt_shard, "symbol outside the field: " + path);
    }
    return shard;
}

EmsrCode code_from_header(const ShardHeader& header, double epsilon) {
    try {
        return build_emsr(Field(header.p), header.n, header.k, header.t,
                          header.q, header.N, header.K, epsilon);
    } catch (const Error& e) {
        raise(Errc::corrupt_shard,
              std::string("header does not describe a valid code (") + e.what() + ")");
    }
}

std::string shard_path(const std::string& dir, std::uint64_t block) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "block_%03llu.shard",
                  static_cast<unsigned long long>(block));
    return dir + "/" + buf;
}

void write_descriptor(const std::string& path, const EmsrCode& code) {
    json j;
    j["format"] = "emsr-code";
    j["version"] = 1;
    j["p"] = code.inner.field.modulus();
    j["epsilon"] = code.epsilon;
    j["inner"] = {{"n", code.inner.n}, {"k", code.inner.k}, {"t", code.inner.t},
                  {"r", code.inner.r}, {"s", code.inner.s}, {"ell", code.inner.ell},
                  {"lambda", code.inner.lambda}};
    j["outer"] = {{"q", code.outer.q}, {"N", code.outer.N}, {"K", code.outer.K},
                  {"M", code.outer.M}, {"D", code.outer.D},
                  {"W", full_weight_count(code.outer)}};
    j["sigma"] = code.sigma;
    j["derived"] = {{"blocks", code.num_blocks()},
                    {"data_blocks", code.data_blocks()},
                    {"contacted", code.contacted()},
                    {"block_len", code.block_len()},
                    {"helper_budget", code.helper_budget()},
                    {"delta", code.delta()},
                    {"delta_hypothesis_holds", code.delta_hypothesis_holds()},
                    {"epsilon_vacuous", code.epsilon_vacuous()}};
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        raise(Errc::bad_config, "cannot open descriptor for writing: " + path);
    f << j.dump(2) << "\n";
}

EmsrCode read_descriptor(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        raise(Errc::bad_config, "cannot open descriptor: " + path);
    json j;
    try {
        f >> j;
        EmsrCode code = build_emsr(Field(j.at("p").get<std::uint32_t>()),
                                   j.at("inner").at("n").get<std::uint32_t>(),
                                   j.at("inner").at("k").get<std::uint32_t>(),
                                   j.at("inner").at("t").get<std::uint32_t>(),
                                   j.at("outer").at("q").get<std::uint32_t>(),
                                   j.at("outer").at("N").get<std::uint32_t>(),
                                   j.at("outer").at("K").get<std::uint32_t>(),
                                   j.at("epsilon").get<double>());
        if (j.at("sigma").get<std::vector<Fe>>() != code.sigma ||
            j.at("inner").at("lambda").get<std::vector<std::vector<Fe>>>() !=
                code.inner.lambda)
            raise(Errc::bad_config, "descriptor tables disagree with reconstruction");
        return code;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        raise(Errc::bad_config, std::string("malformed descriptor: ") + e.what());
    }
}

FileFraming plan_framing(const EmsrCode& code, std::uint64_t file_len) {
    FileFraming fr;
    std::uint32_t b = 0;
    while (b < 8 && (1u << (b + 1)) <= code.inner.field.modulus()) ++b;
    if ((1u << b) > code.inner.field.modulus() || b == 0)
        raise(Errc::invalid_parameters, "field too small to carry bytes");
    fr.bits_per_symbol = b;
    std::uint64_t per_stripe_bits = code.data_blocks() * code.block_len() * b;
    std::uint64_t need = 8 * file_len + 64;
    fr.stripes = (need + per_stripe_bits - 1) / per_stripe_bits;
    if (fr.stripes == 0) fr.stripes = 1;
    fr.capacity_bits = fr.stripes * per_stripe_bits;
    fr.message_symbols = fr.stripes * code.data_blocks() * code.block_len();
    return fr;
}

std::vector<Fe> pack_file(const EmsrCode& code, const std::vector<std::uint8_t>& bytes,
                          const FileFraming& framing) {
    (void)code;
    const std::uint32_t b = framing.bits_per_symbol;
    const std::uint64_t data_bits = 8 * bytes.size();
    const std::uint64_t trailer_start = framing.capacity_bits - 64;
    if (data_bits > trailer_start)
        raise(Errc::dimension_mismatch, "framing too small for the file");
    std::uint8_t trailer[8];
    std::uint64_t len = bytes.size();
    for (int i = 0; i < 8; ++i) trailer[i] = static_cast<std::uint8_t>(len >> (8 * i));

    auto bit_at = [&](std::uint64_t pos) -> std::uint32_t {
        if (pos < data_bits)
            return (bytes[pos / 8] >> (7 - pos % 8)) & 1;
        if (pos >= trailer_start) {
            std::uint64_t tp = pos - trailer_start;
            return (trailer[tp / 8] >> (7 - tp % 8)) & 1;
        }
        return 0;
    };

    std::vector<Fe> symbols(framing.message_symbols, 0);
    for (std::uint64_t si = 0; si < symbols.size(); ++si) {
        Fe v = 0;
        for (std::uint32_t i = 0; i < b; ++i)
            v = static_cast<Fe>(v << 1 | bit_at(si * b + i));
        symbols[si] = v;
    }
    return symbols;
}

std::vector<std::uint8_t> unpack_file(const EmsrCode& code,
                                      const std::vector<Fe>& symbols) {
    std::uint32_t b = 0;
    while (b < 8 && (1u << (b + 1)) <= code.inner.field.modulus()) ++b;
    const std::uint64_t per_stripe = code.data_blocks() * code.block_len();
    if (per_stripe == 0 || symbols.size() % per_stripe != 0 || symbols.empty())
        raise(Errc::corrupt_shard, "message symbol count is not whole stripes");
    const std::uint64_t capacity = symbols.size() * b;

    auto bit_at = [&](std::uint64_t pos) -> std::uint32_t {
        const Fe sym = symbols[pos / b];
        return (sym >> (b - 1 - pos % b)) & 1;
    };

    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) {
        std::uint8_t byte = 0;
        for (int bit = 0; bit < 8; ++bit)
            byte = static_cast<std::uint8_t>(
                byte << 1 | bit_at(capacity - 64 + 8 * i + bit));
        len |= static_cast<std::uint64_t>(byte) << (8 * i);
    }
    if (8 * len > capacity - 64)
        raise(Errc::corrupt_shard, "length trailer exceeds capacity");

    std::vector<std::uint8_t> bytes(len, 0);
    for (std::uint64_t i = 0; i < len; ++i) {
        std::uint8_t byte = 0;
        for (int bit = 0; bit < 8; ++bit)
            byte = static_cast<std::uint8_t>(byte << 1 | bit_at(8 * i + bit));
        bytes[i] = byte;
    }
    return bytes;
}

SimConfig parse_sim_config(const std::string& json_text) {
    SimConfig cfg;
    try {
        json j = json::parse(json_text);
        cfg.n = j.at("inner").at("n").get<std::uint32_t>();
        cfg.k = j.at("inner").at("k").get<std::uint32_t>();
        cfg.t = j.at("inner").at("t").get<std::uint32_t>();
        cfg.q = j.at("outer").at("q").get<std::uint32_t>();
        cfg.N = j.at("outer").at("N").get<std::uint32_t>();
        cfg.K = j.at("outer").at("K").get<std::uint32_t>();
        cfg.epsilon = j.at("epsilon").get<double>();
        cfg.trials = j.at("trials").get<std::uint64_t>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("policies")) {
            const json& p = j["policies"];
            if (p.contains("failure")) {
                std::string v = p["failure"].get<std::string>();
                if (v == "round-robin") cfg.failure_policy = FailurePolicy::round_robin;
                else if (v == "seeded-random") cfg.failure_policy = FailurePolicy::seeded_random;
                else raise(Errc::bad_config, "unknown failure policy: " + v);
            }
            if (p.contains("free_helpers")) {
                std::string v = p["free_helpers"].get<std::string>();
                if (v == "ascending") cfg.free_policy = FreePolicy::ascending;
                else if (v == "seeded-random") cfg.free_policy = FreePolicy::seeded_random;
                else raise(Errc::bad_config, "unknown free-helper policy: " + v);
            }
        }
        if (j.contains("output")) {
            const json& o = j["output"];
            if (o.contains("csv")) cfg.csv_path = o["csv"].get<std::string>();
            if (o.contains("json")) cfg.json_path = o["json"].get<std::string>();
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        raise(Errc::bad_config, std::string("malformed config: ") + e.what());
    }
    if (cfg.epsilon < 0)
        raise(Errc::bad_config, "epsilon must be >= 0");
    return cfg;
}

std::string sim_report_csv(const SimReport& report) {
    std::string out = "trial,failed,helpers,compulsory,max_helper_symbols,budget_symbols,pass\n";
    for (const TrialReport& tr : report.trials) {
        out += std::to_string(tr.trial) + "," + std::to_string(tr.failed) + "," +
               std::to_string(tr.contacted) + "," + std::to_string(tr.compulsory) + "," +
               std::to_string(tr.max_helper_symbols) + "," +
               format_budget(tr.budget_symbols) + "," + (tr.pass ? "1" : "0") + "\n";
    }
    return out;
}

std::string sim_report_json(const SimReport& report) {
    json j;
    j["config"] = {
        {"inner", {{"n", report.config.n}, {"k", report.config.k}, {"t", report.config.t}}},
        {"outer", {{"q", report.config.q}, {"N", report.config.N}, {"K", report.config.K}}},
        {"epsilon", report.config.epsilon},
        {"trials", report.config.trials},
        {"seed", report.config.seed},
        {"policies",
         {{"failure", report.config.failure_policy == FailurePolicy::round_robin
                          ? "round-robin"
                          : "seeded-random"},
          {"free_helpers", report.config.free_policy == FreePolicy::ascending
                               ? "ascending"
                               : "seeded-random"}}}};
    j["field_modulus"] = report.field_modulus;
    j["pass_count"] = report.pass_count;
    j["fail_count"] = report.fail_count;
    j["max_helper_symbols"] = report.max_helper_symbols;
    j["mean_max_helper_symbols"] = report.mean_max_helper_symbols;
    j["hypothesis_holds"] = report.hypothesis_holds;
    j["epsilon_vacuous"] = report.epsilon_vacuous;
    json hist = json::object();
    for (const auto& [count, times] : report.compulsory_histogram)
        hist[std::to_string(count)] = times;
    j["compulsory_histogram"] = hist;
    json trials = json::array();
    for (const TrialReport& tr : report.trials)
        trials.push_back({{"trial", tr.trial},
                          {"failed", tr.failed},
                          {"helpers", tr.contacted},
                          {"compulsory", tr.compulsory},
                          {"max_helper_symbols", tr.max_helper_symbols},
                          {"budget_symbols", tr.budget_symbols},
                          {"pass", tr.pass}});
    j["per_trial"] = trials;
    return j.dump(2) + "\n";
}

} // namespace emsr
